#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swallowkit/builder.hpp"
#include "swallowkit/cgc.hpp"
#include "swallowkit/curves.hpp"
#include "swallowkit/deform.hpp"
#include "swallowkit/frontal.hpp"
#include "swallowkit/io.hpp"

namespace fs = std::filesystem;
using namespace swallowkit;

namespace {

enum Exit { kOk = 0, kCertificateFailed = 1, kParse = 2, kDomain = 3, kPrecondition = 4 };

struct Globals {
    double tol_sign = SignTolerance{}.indeterminate;
    double tol_residual = 1e-5;
    std::string out;  // report path; stdout when empty
};

ClassifyOptions classify_options(const Globals& g) {
    ClassifyOptions opt;
    opt.sign.indeterminate = g.tol_sign;
    return opt;
}

void emit(const Globals& g, const Json& j) {
    if (g.out.empty()) std::cout << dump(j);
    else write_file_atomically(g.out, dump(j));
}

std::vector<double> numbers(const std::string& text, std::size_t count, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParseError(std::string("bad number in ") + what + ": '" + item + "'");
        }
    }
    if (out.size() != count) throw ParseError(std::string(what) + " needs " + std::to_string(count) + " values");
    return out;
}

SwallowtailData swallowtail_data_of(const GermSpec& s) {
    if (s.swallowtail) return *s.swallowtail;
    if (s.asymptotic) return as_swallowtail_data(*s.asymptotic);
    throw PreconditionError("spec '" + s.name + "' does not carry swallowtail or asymptotic data");
}

Json classify_cmd(const Globals& g, const std::string& path, const std::string& at) {
    GermSpec s = load_germ_spec(path);
    if (!at.empty()) {
        const auto p = numbers(at, 2, "--at");
        s.at = {p[0], p[1]};
    }
    return to_json(classify(germ_of(s), classify_options(g)));
}

Json invariants_cmd(const Globals& g, const std::string& path) {
    const GermSpec s = load_germ_spec(path);
    const MapGerm germ = germ_of(s);
    const ClassifyOptions opt = classify_options(g);
    const SingularityReport rep = classify(germ, opt);
    Json j;
    j["name"] = s.name;
    j["kind"] = to_string(s.kind);
    j["a"] = number(s.a);
    if (s.swallowtail || s.asymptotic) j["discriminants"] = to_json(discriminants(swallowtail_data_of(s)));
    if (s.asymptotic) j["delta_qr"] = number(delta_qr(*s.asymptotic, 0.0));
    j["classification"] = to_json(rep);
    if (rep.kind == PointKind::SecondKind) {
        const NormalField nf = oriented_normal(germ, opt);
        Json probes = Json::array();
        for (double u : {-0.05, -0.01, 0.01, 0.05}) {
            Json p;
            p["u"] = number(u);
            p["sigma_g_C"] = sign_json(sigma_g_C(nf, u, opt));
            p["kappa_nu"] = number(kappa_nu_on_axis(nf, u, opt));
            probes.push_back(p);
        }
        j["axis_probes"] = probes;
        j["limit_normal"] = vector(limit_normal_at_second_kind(germ, opt));
        j["singular_image"] = to_json(classify_cusp(factor_cusp(CurveGerm{singular_image(germ)})));
    }
    return j;
}

Json cusp_cmd(const std::string& path, const std::string& action) {
    const GermSpec s = load_germ_spec(path);
    CurveGerm curve;
    if (s.kind == GermKind::Curve) curve = CurveGerm{SymField(*s.curve)};
    else curve = CurveGerm{singular_image(germ_of(s))};
    const CuspFactorization x = factor_cusp(curve);
    Json j;
    j["action"] = action;
    if (action == "factor") {
        j["xi"] = x.xi.expr ? Json::array({to_string(x.xi.expr->x), to_string(x.xi.expr->y), to_string(x.xi.expr->z)})
                            : Json(nullptr);
        Json samples = Json::array();
        for (double u : {-0.1, 0.0, 0.1}) samples.push_back({{"u", number(u)}, {"xi", vector(value(x.xi.f, u, 0.0))}});
        j["samples"] = samples;
    } else if (action == "classify") {
        j["cusp"] = to_json(classify_cusp(x));
    } else if (action == "normalize") {
        const NormalizedCurve n = normalize_half_arclength(curve, x);
        Json samples = Json::array();
        for (double u : {-0.1, -0.05, 0.0, 0.05, 0.1}) {
            samples.push_back({{"u", number(u)},
                               {"t", number(n.param.t_of_u(u, 0.0, 0).value())},
                               {"xi_hat", vector(value(n.factor.xi.f, u, 0.0))},
                               {"norm", number(norm(value(n.factor.xi.f, u, 0.0)))}});
        }
        j["samples"] = samples;
    } else {
        throw ParseError("unknown cusp action '" + action + "' (factor, classify, normalize)");
    }
    return j;
}

Json build_cmd(const Globals& g, const std::string& path) {
    const GermSpec s = load_germ_spec(path);
    const MapGerm germ = germ_of(s);
    Json j;
    j["name"] = s.name;
    j["kind"] = to_string(s.kind);
    if (germ.f.expr) {
        const Vec3Expr e = *germ.f.expr;
        auto text = [](const Expr& c) {
            const auto p = to_polynomial(c);
            return to_string(p ? from_polynomial(pruned(*p, 1e-15)) : c);
        };
        j["f"] = Json::array({text(e.x), text(e.y), text(e.z)});
    } else {
        j["f"] = nullptr;
    }
    if (s.swallowtail || s.asymptotic) j["discriminants"] = to_json(discriminants(swallowtail_data_of(s)));
    j["classification"] = to_json(classify(germ, classify_options(g)));
    return j;
}

int deform_cmd(const Globals& g, const std::string& p1, const std::string& p2, const std::string& recipe, int steps,
               bool keep_sign, const std::string& mesh_dir) {
    const GermSpec s1 = load_germ_spec(p1), s2 = load_germ_spec(p2);
    if (s1.a != s2.a) throw PreconditionError("endpoints live in different space forms");
    DeformOptions opt;
    opt.a = s1.a;
    opt.sign.indeterminate = g.tol_sign;
    DeformationFamily family;
    if (recipe == "A") {
        family = deform_generic_swallowtails(swallowtail_data_of(s1), swallowtail_data_of(s2), opt);
    } else if (recipe == "any") {
        family = deform_swallowtails(swallowtail_data_of(s1), swallowtail_data_of(s2), opt);
    } else if (recipe == "D") {
        if (!s1.asymptotic || !s2.asymptotic) throw PreconditionError("recipe D needs two asymptotic-data specs");
        family = deform_asymptotic_swallowtails(*s1.asymptotic, *s2.asymptotic, keep_sign, opt);
    } else {
        throw ParseError("unknown recipe '" + recipe + "' (A, D, any)");
    }
    CertificateOptions copt;
    copt.points = steps;
    copt.classify = classify_options(g);
    const Certificate cert = certify(family, copt);
    emit(g, to_json(cert));
    if (!mesh_dir.empty()) {
        fs::create_directories(mesh_dir);
        for (std::size_t k = 0; k < family.stages.size(); ++k)
            for (int i = 0; i < steps; ++i) {
                const double t = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
                const MeshGrid mesh = sample_germ(family.stage_germ(k, t), {-0.5, 0.5, -0.3, 0.3}, 40, 24);
                std::ostringstream os;
                write_obj(os, mesh, family.stages[k].name + " t=" + std::to_string(t));
                char name[64];
                std::snprintf(name, sizeof name, "stage%zu_%03d.obj", k, i);
                write_file_atomically(fs::path(mesh_dir) / name, os.str());
            }
    }
    return cert.pass ? kOk : kCertificateFailed;
}

Json mesh_cmd(const std::string& path, const std::string& domain, const std::string& res, const std::string& out,
              const std::string& csv) {
    const auto d = numbers(domain, 4, "--domain");
    const auto r = numbers(res, 2, "--res");
    const int m = static_cast<int>(r[0]), n = static_cast<int>(r[1]);
    if (m <= 0 || n <= 0 || m != r[0] || n != r[1]) throw ParseError("--res needs two positive integers");
    const GermSpec s = load_germ_spec(path);
    const MapGerm germ = germ_of(s);
    const MeshGrid mesh = sample_germ(germ, {d[0], d[1], d[2], d[3]}, m, n);
    std::ostringstream os;
    write_obj(os, mesh, s.name);
    write_file_atomically(out, os.str());
    std::string csv_path = csv.empty() ? fs::path(out).replace_extension(".csv").string() : csv;
    std::ostringstream cs;
    curvature_table(germ, mesh).write(cs);
    write_file_atomically(csv_path, cs.str());
    Json j;
    j["obj"] = out;
    j["csv"] = csv_path;
    j["vertices"] = mesh.vertices.size();
    j["faces"] = static_cast<std::size_t>(m) * n;
    return j;
}

Json cgc_cmd(const Globals& g, int grid, const std::string& dir) {
    if (grid < 5) throw ParseError("--grid must be at least 5");
    auto profile = std::make_shared<const RadialProfile>();
    const RadialProfile half(RadialOptions{0.5, 1.6, 5e-5});
    const FundamentalForms printed(profile, CurvatureModel::Printed);
    const FundamentalForms forms(profile, CurvatureModel::Integrable);
    GridSpec spec;
    spec.nu = spec.nv = grid;
    ReconstructOptions ropt;
    ropt.guard = g.tol_residual;
    // The base point (0, 1) must be a grid node.
    if ((grid - 1) % 2 != 0) throw PreconditionError("--grid must be odd so that (0,1) is a grid node");
    const SurfaceGrid f = reconstruct_surface(forms, spec, ropt);
    const SurfaceGrid h = parallel_surface(f);
    const RoundTrip rt = round_trip(f, forms);
    const ParallelReport pr = check_parallel_surface(h, forms);
    const SingularityReport germ = classify(parallel_surface_germ(forms));

    double ode = 0.0;
    for (double r = profile->lo(); r <= profile->hi(); r += 0.00731) ode = std::max(ode, std::abs(profile->residual(r)));
    double pde = 0.0;
    for (int j = 0; j < grid; j += std::max(1, grid / 40))
        for (int i = 0; i < grid; i += std::max(1, grid / 40))
            pde = std::max(pde, std::abs(forms.omega().pde_residual(spec.u(i), spec.v(j))));

    auto triple = [](const SwallowtailConditions& c) {
        Json t;
        t["model"] = to_string(c.model);
        t["lambda1"] = number(c.lambda1);
        t["lambda2"] = number(c.lambda2);
        t["lambda1_u"] = number(c.lambda1_u);
        t["lambda1_uu"] = number(c.lambda1_uu);
        t["lambda1_v"] = number(c.lambda1_v);
        return t;
    };
    Json j;
    j["grid"] = {{"u", {number(spec.u0), number(spec.u1)}}, {"v", {number(spec.v0), number(spec.v1)}}, {"n", grid}};
    j["ode_residual"] = number(ode);
    j["richardson"] = number(profile->sup_difference(half));
    j["pde_residual"] = number(pde);
    j["integrability_residual"] = {{"printed", number(integrability_residual(printed, spec))},
                                   {"integrable", number(integrability_residual(forms, spec))}};
    j["conditions"] = Json::array({triple(check_swallowtail_conditions(printed)),
                                   triple(check_swallowtail_conditions(forms))});
    j["round_trip"] = {{"first_form", number(rt.first_form)},   {"second_form", number(rt.second_form)},
                       {"orthogonality", number(rt.orthogonality)}, {"mean_curvature", number(rt.mean_curvature)},
                       {"frame", number(rt.frame)}};
    j["parallel_surface"] = {{"samples", pr.samples},
                             {"max_curvature_error", number(pr.max_curvature_error)},
                             {"singular_nodes", pr.singular_nodes},
                             {"max_singular_offset", number(pr.max_singular_offset)},
                             {"other_singular_nodes", pr.other_singular_nodes},
                             {"classification", to_json(germ)}};
    if (!dir.empty()) {
        fs::create_directories(dir);
        std::ostringstream fo, ho, cs;
        write_obj(fo, mesh_of(f), "constant mean curvature 1/2");
        write_obj(ho, mesh_of(h), "parallel surface, constant Gaussian curvature 1");
        write_file_atomically(fs::path(dir) / "cmc.obj", fo.str());
        write_file_atomically(fs::path(dir) / "parallel.obj", ho.str());
        CsvTable t({"u", "v", "x", "y", "z", "hx", "hy", "hz", "omega", "lambda1", "lambda2"});
        for (int jv = 0; jv < grid; ++jv)
            for (int iu = 0; iu < grid; ++iu) {
                const double u = spec.u(iu), v = spec.v(jv);
                const Vec3d& p = f.at(iu, jv);
                const Vec3d& q = h.at(iu, jv);
                t.add({u, v, p.x, p.y, p.z, q.x, q.y, q.z, forms.omega().value(u, v).w,
                       forms.lambda1(u, v, 0).value(), forms.lambda2(u, v, 0).value()});
            }
        t.write(cs);
        write_file_atomically(fs::path(dir) / "samples.csv", cs.str());
        j["artifacts"] = {(fs::path(dir) / "cmc.obj").string(), (fs::path(dir) / "parallel.obj").string(),
                          (fs::path(dir) / "samples.csv").string()};
    }
    return j;
}

Json frenet_cmd(const std::string& kappa, const std::string& tau, const std::string& range, int samples,
                const std::string& csv) {
    const auto r = numbers(range, 2, "--range");
    if (!(r[0] < 0.0 && 0.0 < r[1])) throw ParseError("--range must contain 0 in its interior");
    if (samples < 2) throw ParseError("--samples must be at least 2");
    FrenetData fd{SymScalar(parse(kappa)), SymScalar(parse(tau)), Frame{}, 1e-3};
    const FrenetCurves c = integrate_frenet(fd, r[0], r[1]);
    CsvTable t({"u", "x", "y", "z", "tx", "ty", "tz", "gx", "gy", "gz"});
    Json pts = Json::array();
    for (int i = 0; i < samples; ++i) {
        const double u = r[0] + (r[1] - r[0]) * i / (samples - 1);
        const Vec3d G = value(c.arclength_curve.f, u, 0.0), T = value(c.unit_tangent.f, u, 0.0),
                    g = value(c.cusp_curve.f, u, 0.0);
        t.add({u, G.x, G.y, G.z, T.x, T.y, T.z, g.x, g.y, g.z});
        pts.push_back({{"u", number(u)}, {"curve", vector(G)}, {"tangent", vector(T)}, {"cusp", vector(g)}});
    }
    if (!csv.empty()) {
        std::ostringstream os;
        t.write(os);
        write_file_atomically(csv, os.str());
    }
    Json j;
    j["kappa"] = kappa;
    j["tau"] = tau;
    j["samples"] = pts;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"swallowkit: swallowtail germs, deformations and certificates"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--tol-sign", g.tol_sign, "relative band below which a sign is indeterminate")
        ->capture_default_str();
    app.add_option("--tol-residual", g.tol_residual, "Gauss/Codazzi guard for surface reconstruction")
        ->capture_default_str();
    app.add_option("-o,--out", g.out, "write the JSON report to this file instead of stdout");

    std::string spec, spec2, at, recipe = "any", action = "classify", domain = "-1,1,-1,1", res = "40,40", out, csv,
                                dir, kappa, tau, range = "-1,1";
    int steps = 21, grid = 201, samples = 41;
    bool keep_sign = false;

    auto* c_classify = app.add_subcommand("classify", "classify the germ at a point");
    c_classify->add_option("spec", spec, "germ-spec JSON")->required();
    c_classify->add_option("--at", at, "base point u,v");

    auto* c_inv = app.add_subcommand("invariants", "signs, curvatures and discriminants at the base point");
    c_inv->add_option("spec", spec)->required();

    auto* c_cusp = app.add_subcommand("cusp", "factor, classify or normalize a space-cusp");
    c_cusp->add_option("spec", spec, "curve spec, or a germ whose singular image is used")->required();
    c_cusp->add_option("--action", action, "factor | classify | normalize")->capture_default_str();

    auto* c_build = app.add_subcommand("build", "build the germ from its data");
    c_build->add_option("spec", spec)->required();

    auto* c_deform = app.add_subcommand("deform", "deform one germ into another and certify the family");
    c_deform->add_option("spec1", spec)->required();
    c_deform->add_option("spec2", spec2)->required();
    c_deform->add_option("--recipe", recipe, "A | D | any")->capture_default_str();
    c_deform->add_option("--steps", steps, "certificate samples per stage")->capture_default_str()->check(
        CLI::PositiveNumber);
    c_deform->add_flag("--keep-sign", keep_sign, "recipe D: require and keep a common curvature sign");
    c_deform->add_option("--meshes", dir, "directory for per-t OBJ meshes");

    auto* c_mesh = app.add_subcommand("mesh", "OBJ mesh of the germ plus a curvature CSV");
    c_mesh->add_option("spec", spec)->required();
    c_mesh->add_option("--domain", domain, "u0,u1,v0,v1")->capture_default_str();
    c_mesh->add_option("--res", res, "m,n cells")->capture_default_str();
    c_mesh->add_option("--out", out, "OBJ path")->required();
    c_mesh->add_option("--csv", csv, "CSV path (default: OBJ path with .csv)");

    auto* c_cgc = app.add_subcommand("cgc", "constant Gaussian curvature surface with a swallowtail");
    c_cgc->add_option("--grid", grid, "nodes per side on [-0.5,0.5]x[0.6,1.4]")->capture_default_str();
    c_cgc->add_option("--dir", dir, "directory for OBJ/CSV artifacts");

    auto* c_frenet = app.add_subcommand("frenet", "integrate a unit-speed curve from curvature and torsion");
    c_frenet->add_option("--kappa", kappa, "curvature expression in u")->required();
    c_frenet->add_option("--tau", tau, "torsion expression in u")->required();
    c_frenet->add_option("--range", range, "lo,hi")->capture_default_str();
    c_frenet->add_option("--samples", samples)->capture_default_str();
    c_frenet->add_option("--csv", csv, "CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kParse;
    }

    try {
        if (*c_classify) emit(g, classify_cmd(g, spec, at));
        else if (*c_inv) emit(g, invariants_cmd(g, spec));
        else if (*c_cusp) emit(g, cusp_cmd(spec, action));
        else if (*c_build) emit(g, build_cmd(g, spec));
        else if (*c_deform) return deform_cmd(g, spec, spec2, recipe, steps, keep_sign, dir);
        else if (*c_mesh) emit(g, mesh_cmd(spec, domain, res, out, csv));
        else if (*c_cgc) emit(g, cgc_cmd(g, grid, dir));
        else if (*c_frenet) emit(g, frenet_cmd(kappa, tau, range, samples, csv));
        return kOk;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition: " << e.what() << "\n";
        return kPrecondition;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDomain;
    }
}
