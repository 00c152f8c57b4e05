#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "builder.hpp"
#include "cgc.hpp"
#include "curves.hpp"
#include "deform.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "frontal.hpp"

namespace swallowkit {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Germ-spec documents

enum class GermKind { Swallowtail, Asymptotic, Raw, Curve };

inline const char* to_string(GermKind k) {
    switch (k) {
        case GermKind::Swallowtail: return "swallowtail-data";
        case GermKind::Asymptotic: return "asymptotic-data";
        case GermKind::Raw: return "raw-germ";
        case GermKind::Curve: return "curve";
    }
    return "";
}

struct GermSpec {
    GermKind kind = GermKind::Raw;
    std::string name;
    double a = 0.0;
    Point at{};
    std::optional<SwallowtailData> swallowtail;
    std::optional<AsymptoticData> asymptotic;
    std::optional<Vec3Expr> raw;    // raw-germ f
    std::optional<Vec3Expr> curve;  // curve gamma
};

namespace detail {

inline std::string expr_text(const Json& j, const std::string& key) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << j.get<double>();
        return os.str();
    }
    throw ParseError("field '" + key + "' must be an expression string or a number");
}

inline Vec3Expr vector_field(const Json& doc, const std::string& key) {
    if (!doc.contains(key)) throw ParseError("missing field '" + key + "'");
    const Json& j = doc.at(key);
    try {
        if (j.is_string()) return parse_vec(j.get<std::string>());
        if (!j.is_array() || j.size() != 3) throw ParseError("field '" + key + "' must be a 3-array or a tuple string");
        return parse_vec(expr_text(j[0], key), expr_text(j[1], key), expr_text(j[2], key));
    } catch (const ParseError& e) {
        throw ParseError("field '" + key + "': " + e.what());
    }
}

inline Expr scalar_field(const Json& doc, const std::string& key) {
    if (!doc.contains(key)) throw ParseError("missing field '" + key + "'");
    try {
        return parse(expr_text(doc.at(key), key));
    } catch (const ParseError& e) {
        throw ParseError("field '" + key + "': " + e.what());
    }
}

}  // namespace detail

inline GermSpec germ_spec_from_json(const Json& doc) {
    if (!doc.is_object()) throw ParseError("germ spec must be a JSON object");
    if (!doc.contains("kind") || !doc["kind"].is_string()) throw ParseError("missing string field 'kind'");
    GermSpec s;
    const std::string kind = doc["kind"].get<std::string>();
    s.name = doc.value("name", std::string{});
    if (doc.contains("a")) {
        if (!doc["a"].is_number()) throw ParseError("field 'a' must be a number");
        s.a = doc["a"].get<double>();
    }
    if (doc.contains("at")) {
        const Json& at = doc["at"];
        if (!at.is_array() || at.size() != 2 || !at[0].is_number() || !at[1].is_number())
            throw ParseError("field 'at' must be [u, v]");
        s.at = {at[0].get<double>(), at[1].get<double>()};
    }
    if (kind == "swallowtail-data") {
        s.kind = GermKind::Swallowtail;
        s.swallowtail = SwallowtailData{detail::vector_field(doc, "xi"), detail::vector_field(doc, "b")};
    } else if (kind == "asymptotic-data") {
        s.kind = GermKind::Asymptotic;
        s.asymptotic = AsymptoticData{detail::vector_field(doc, "xi"), detail::scalar_field(doc, "q"),
                                      detail::vector_field(doc, "r")};
    } else if (kind == "raw-germ") {
        s.kind = GermKind::Raw;
        s.raw = detail::vector_field(doc, "f");
    } else if (kind == "curve") {
        s.kind = GermKind::Curve;
        s.curve = detail::vector_field(doc, "gamma");
    } else {
        throw ParseError("unknown germ kind '" + kind + "'");
    }
    return s;
}

inline GermSpec parse_germ_spec(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
    }
    return germ_spec_from_json(doc);
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline GermSpec load_germ_spec(const std::filesystem::path& path) { return parse_germ_spec(read_text(path)); }

/// Map germ described by a spec; asymptotic data is built without demanding
/// a swallowtail so that degenerate inputs can still be inspected.
inline MapGerm germ_of(const GermSpec& s) {
    MapGerm g;
    switch (s.kind) {
        case GermKind::Swallowtail: g = build(*s.swallowtail, s.a); break;
        case GermKind::Asymptotic: g = build_asymptotic(*s.asymptotic, s.a); break;
        case GermKind::Raw: g = MapGerm{SymField(*s.raw), SpaceForm{s.a}, {}, {}}; break;
        case GermKind::Curve: throw PreconditionError("a curve spec does not describe a surface germ");
    }
    g.base = s.at;
    g.label = s.name;
    return g;
}

// ---------------------------------------------------------------------------
// JSON reports.  Numbers carry 12 significant digits; field order is fixed.

inline Json number(double x) {
    if (!std::isfinite(x)) return nullptr;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    const double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;
}

inline Json number(std::optional<double> x) { return x ? number(*x) : Json(nullptr); }

inline Json vector(const Vec3d& p) { return Json::array({number(p.x), number(p.y), number(p.z)}); }

inline Json sign_json(Sign s) {
    if (s == Sign::Indeterminate) return "indeterminate";
    return to_int(s);
}

inline Json to_json(const SingularityReport& r) {
    Json j;
    j["at"] = Json::array({number(r.at.u), number(r.at.v)});
    j["a"] = number(r.a);
    j["is_singular"] = r.is_singular;
    j["kind"] = to_string(r.kind);
    j["is_nondegenerate"] = r.is_nondegenerate;
    j["is_frontal"] = r.is_frontal;
    j["is_wavefront"] = r.is_wavefront;
    j["is_cuspidal_edge"] = r.is_cuspidal_edge;
    j["is_generalized_swallowtail"] = r.is_generalized_swallowtail;
    j["is_swallowtail"] = r.is_swallowtail;
    j["sigma0_S"] = sign_json(r.sigma0_S);
    j["sigma_S"] = sign_json(r.sigma_S);
    j["kappa_nu"] = number(r.kappa_nu);
    j["mu_C"] = number(r.mu_C);
    j["null_vector"] = Json::array({number(r.null_vector[0]), number(r.null_vector[1])});
    j["singular_tangent"] = Json::array({number(r.singular_tangent[0]), number(r.singular_tangent[1])});
    j["lambda_u"] = number(r.lambda_u);
    j["lambda_v"] = number(r.lambda_v);
    j["normal"] = vector(r.normal);
    j["orientation"] = r.orientation;
    j["orientation_rule"] = r.orientation_rule;
    j["delta0_S"] = number(r.delta0_S);
    j["delta1_S"] = number(r.delta1_S);
    j["notes"] = r.notes;
    return j;
}

inline Json to_json(const Discriminants& d) {
    Json j;
    j["delta0_S"] = number(d.delta0);
    j["delta1_S"] = number(d.delta1);
    j["cusp_determinant"] = number(d.cusp_determinant);
    j["cross_norm2"] = number(d.cross_norm2);
    return j;
}

inline Json to_json(const CuspClass& c) {
    Json j;
    j["kind"] = to_string(c.kind);
    j["handedness"] = to_string(c.handedness);
    j["cross_norm"] = number(c.cross_norm);
    j["determinant"] = number(c.determinant);
    j["determinant_sign"] = sign_json(c.determinant_sign);
    return j;
}

inline Json to_json(const Certificate& c) {
    Json j;
    j["recipe"] = c.recipe;
    j["stages"] = c.stages;
    Json preds = Json::array();
    for (ClassPredicate p : c.predicates) preds.push_back(to_string(p));
    j["predicates"] = preds;
    Json grid = Json::array();
    for (double t : c.t_grid) grid.push_back(number(t));
    j["t_grid"] = grid;
    Json per = Json::array();
    for (const CertificateSample& s : c.samples) {
        Json e;
        e["stage"] = s.stage;
        e["t"] = number(s.t);
        e["global_t"] = number(s.global_t);
        e["predicate"] = s.predicate;
        Json gc = Json::array(), cv = Json::array();
        for (Sign x : s.sigma_g_C) gc.push_back(sign_json(x));
        for (Sign x : s.curvature) cv.push_back(sign_json(x));
        e["sigma_g_C"] = gc;
        e["curvature_signs"] = cv;
        e["delta_qr"] = number(s.delta_qr);
        e["error"] = s.error ? Json(*s.error) : Json(nullptr);
        e["report"] = to_json(s.report);
        per.push_back(std::move(e));
    }
    j["per_t"] = per;
    Json links = Json::array();
    for (double r : c.link_residuals) links.push_back(number(r));
    j["link_residuals"] = links;
    j["notes"] = c.notes;
    j["coverage"] = c.coverage;
    j["pass"] = c.pass;
    j["failures"] = c.failures;
    return j;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Writes through a temporary sibling and renames it into place.
inline void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DomainError("cannot write " + tmp.string());
        out << content;
        if (!out) throw DomainError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Meshes and tables

struct MeshGrid {
    int m = 0, n = 0;  // cells along u and v; (m + 1)(n + 1) vertices
    std::vector<double> us, vs;
    std::vector<Vec3d> vertices;  // row-major in v: index j * (m + 1) + i
};

struct Domain {
    double u0 = -1, u1 = 1, v0 = -1, v1 = 1;
};

inline MeshGrid sample_germ(const MapGerm& g, const Domain& d, int m, int n) {
    if (m <= 0 || n <= 0) throw PreconditionError("mesh resolution must be positive");
    MeshGrid mesh{m, n, {}, {}, {}};
    for (int i = 0; i <= m; ++i) mesh.us.push_back(d.u0 + (d.u1 - d.u0) * i / m);
    for (int j = 0; j <= n; ++j) mesh.vs.push_back(d.v0 + (d.v1 - d.v0) * j / n);
    mesh.vertices.resize(static_cast<std::size_t>(m + 1) * (n + 1));
    parallel_for(static_cast<std::size_t>(n + 1), [&](std::size_t j) {
        for (int i = 0; i <= m; ++i) mesh.vertices[j * (m + 1) + i] = g(mesh.us[i], mesh.vs[j]);
    });
    for (const Vec3d& p : mesh.vertices) g.space.require(p);
    return mesh;
}

inline MeshGrid mesh_of(const SurfaceGrid& s) {
    MeshGrid mesh{s.grid.nu - 1, s.grid.nv - 1, {}, {}, s.f};
    for (int i = 0; i < s.grid.nu; ++i) mesh.us.push_back(s.grid.u(i));
    for (int j = 0; j < s.grid.nv; ++j) mesh.vs.push_back(s.grid.v(j));
    return mesh;
}

inline void write_obj(std::ostream& out, const MeshGrid& mesh, const std::string& comment = {}) {
    char buf[128];
    if (!comment.empty()) out << "# " << comment << "\n";
    for (const Vec3d& p : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.12g %.12g %.12g\n", p.x, p.y, p.z);
        out << buf;
    }
    const int w = mesh.m + 1;
    for (int j = 0; j < mesh.n; ++j)
        for (int i = 0; i < mesh.m; ++i) {
            const int a = j * w + i + 1;
            out << "f " << a << ' ' << a + 1 << ' ' << a + 1 + w << ' ' << a + w << "\n";
        }
}

/// CSV table with a header row; non-finite entries are written empty.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(const std::vector<double>& row) {
        if (row.size() != header_.size()) throw DomainError("CSV row width does not match the header");
        rows_.push_back(row);
    }

    void write(std::ostream& out) const {
        for (std::size_t k = 0; k < header_.size(); ++k) out << (k ? "," : "") << header_[k];
        out << "\n";
        char buf[32];
        for (const auto& row : rows_) {
            for (std::size_t k = 0; k < row.size(); ++k) {
                if (k) out << ',';
                if (std::isfinite(row[k])) {
                    std::snprintf(buf, sizeof buf, "%.12g", row[k]);
                    out << buf;
                }
            }
            out << "\n";
        }
    }

    std::size_t size() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<double>> rows_;
};

/// Per-vertex curvature channel of a germ mesh; singular vertices get empty K.
inline CsvTable curvature_table(const MapGerm& g, const MeshGrid& mesh) {
    CsvTable t({"u", "v", "x", "y", "z", "K_a", "K_ext", "H_E"});
    for (int j = 0; j <= mesh.n; ++j)
        for (int i = 0; i <= mesh.m; ++i) {
            const Vec3d& p = mesh.vertices[static_cast<std::size_t>(j) * (mesh.m + 1) + i];
            double K = NAN, Ke = NAN, H = NAN;
            try {
                const CurvatureReport r = gaussian_curvature(g, mesh.us[i], mesh.vs[j]);
                K = r.K_a;
                Ke = r.K_ext;
                H = r.H_E;
            } catch (const DomainError&) {
            }
            t.add({mesh.us[i], mesh.vs[j], p.x, p.y, p.z, K, Ke, H});
        }
    return t;
}

}  // namespace swallowkit
