// Batch front end: parse point/kernel files, run constructions and
// predicates, emit machine-readable reports. Exit code contract:
//   0 pass, 1 predicate failure, 2 usage or input error.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kernelforge/cnd.hpp"
#include "kernelforge/errors.hpp"
#include "kernelforge/families.hpp"
#include "kernelforge/hyperbolic.hpp"
#include "kernelforge/io.hpp"
#include "kernelforge/kernel_spec.hpp"
#include "kernelforge/mmd.hpp"

namespace {

using kf::io::ojson;

constexpr int kExitPass = 0;
constexpr int kExitPredicateFail = 1;
constexpr int kExitInputError = 2;

struct CommonOpts {
    std::string kernel_file;
    std::string points_file;
    std::string sites_file;
    std::string gamma_file;
    std::string a_file;
    std::string out_file;
    std::string format = "csv";
    bool lift = false;
    int m = 1;
    double tol = -1.0;
    long seed = 0;
};

ojson input_entry(const std::string& path) {
    ojson e;
    e["path"] = path;
    e["fnv1a64"] = kf::io::file_digest(path);
    return e;
}

ojson report_header(const std::string& command, long seed) {
    ojson r;
    r["command"] = command;
    r["inputs"] = ojson::object();
    r["seed"] = seed;
    r["tolerances"] = ojson::object();
    r["verdicts"] = ojson::array();
    r["numbers"] = ojson::object();
    return r;
}

void emit(const ojson& report) { std::cout << report.dump(2) << "\n"; }

ojson psd_verdict_json(const kf::PsdVerdict& v) {
    ojson j;
    j["predicate"] = "psd_class";
    j["class"] = kf::to_string(v.cls);
    j["lambda_min"] = v.lambda_min;
    j["lambda_max"] = v.lambda_max;
    j["tol_used"] = v.tol_used;
    return j;
}

ojson class_report_json(const kf::ClassReport& r) {
    ojson j;
    j["predicate"] = r.predicate;
    j["verdict"] = r.verdict;
    j["tol_used"] = r.tol_used;
    if (r.witness_value) j["witness_value"] = *r.witness_value;
    if (r.witness_pair) j["witness_pair"] = {r.witness_pair->first, r.witness_pair->second};
    if (r.witness_indices) j["witness_indices"] = *r.witness_indices;
    if (!r.detail.empty()) j["detail"] = r.detail;
    return j;
}

/// Points file reader wired to the kernel's expected domain.
std::vector<kf::Point> load_points(const CommonOpts& o, const kf::KernelSpec* spec,
                                   ojson& report, const std::string& path) {
    kf::io::PointParseOptions popts;
    popts.lift = o.lift;
    kf::io::SiteTable sites;
    if (!o.sites_file.empty()) {
        sites = kf::io::read_sites_csv(o.sites_file);
        popts.sites = &sites;
        report["inputs"]["sites"] = input_entry(o.sites_file);
    }
    if (spec) {
        if (const auto* fl = spec->get_if<kf::KernelSpec::Flatten>())
            popts.channels = fl->kernel.channels();
    }
    report["inputs"]["points"] = input_entry(path);
    return kf::io::read_points_csv(path, popts);
}

// --- gram ------------------------------------------------------------------

int cmd_gram(const CommonOpts& o, const std::string& check) {
    ojson report = report_header("gram", o.seed);
    report["inputs"]["kernel"] = input_entry(o.kernel_file);
    const kf::KernelSpec spec = kf::io::load_kernel_file(o.kernel_file);
    const auto points = load_points(o, &spec, report, o.points_file);

    const kf::GramMatrix g = kf::gram(spec, points, true);
    report["numbers"]["n"] = g.matrix.size();
    report["numbers"]["lambda_min"] = g.verdict->lambda_min;
    report["numbers"]["lambda_max"] = g.verdict->lambda_max;
    report["tolerances"]["psd_tol"] = g.verdict->tol_used;
    report["verdicts"].push_back(psd_verdict_json(*g.verdict));

    if (!o.out_file.empty()) {
        if (o.format == "json") {
            ojson m;
            m["matrix"] = kf::io::matrix_to_json(g.matrix);
            kf::io::write_file(o.out_file, m.dump(2) + "\n");
        } else {
            kf::io::write_matrix_csv(o.out_file, g.matrix);
        }
        ojson out;
        out["path"] = o.out_file;
        out["fnv1a64"] = kf::io::file_digest(o.out_file);
        report["outputs"] = ojson::object();
        report["outputs"]["matrix"] = out;
    }

    int exit_code = kExitPass;
    if (!check.empty()) {
        const bool pass = (check == "pd") ? g.verdict->cls == kf::PsdClass::PD
                                          : g.verdict->cls != kf::PsdClass::INDEFINITE;
        ojson v;
        v["predicate"] = "check_" + check;
        v["verdict"] = pass;
        if (!pass) {
            for (std::size_t i = 0; i < points.size() && !v.contains("witness_pair"); ++i)
                for (std::size_t j = i + 1; j < points.size(); ++j)
                    if (kf::points_equal(points[i], points[j])) {
                        v["witness_pair"] = {i, j};
                        v["detail"] = "duplicate points";
                        break;
                    }
            exit_code = kExitPredicateFail;
        }
        report["verdicts"].push_back(v);
    }
    emit(report);
    return exit_code;
}

// --- check -----------------------------------------------------------------

kf::SymMatrix gamma_matrix_from_inputs(const CommonOpts& o, ojson& report) {
    if (!o.gamma_file.empty()) {
        report["inputs"]["gamma"] = input_entry(o.gamma_file);
        return kf::io::read_matrix_file(o.gamma_file);
    }
    if (o.kernel_file.empty() || o.points_file.empty())
        throw std::invalid_argument("need --gamma, or --kernel (site kernel) with --points");
    report["inputs"]["kernel"] = input_entry(o.kernel_file);
    const kf::SiteCnd gamma =
        kf::io::parse_site_cnd(kf::io::json::parse(kf::io::read_file(o.kernel_file)));
    const auto points = load_points(o, nullptr, report, o.points_file);
    const int n = static_cast<int>(points.size());
    kf::SymMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m.set(i, j, gamma(points[i], points[j]));
    return m;
}

int cmd_check(const CommonOpts& o, const std::string& predicate, int order) {
    ojson report = report_header("check", o.seed);
    report["numbers"]["order"] = order;
    bool pass = false;

    if (predicate == "cnd") {
        const kf::SymMatrix g = gamma_matrix_from_inputs(o, report);
        const kf::CndReport r = kf::check_cnd(g, o.tol);
        pass = r.is_cnd;
        ojson v;
        v["predicate"] = "cnd";
        v["verdict"] = r.is_cnd;
        v["lambda_max_projected"] = r.lambda_max_projected;
        v["tol_used"] = r.tol_used;
        if (r.witness_weights) v["witness_weights"] = *r.witness_weights;
        report["verdicts"].push_back(v);
        report["tolerances"]["cnd_tol"] = r.tol_used;
    } else if (predicate == "metrizable") {
        // the point-level route also rejects duplicate points
        kf::ClassReport r;
        if (!o.gamma_file.empty()) {
            report["inputs"]["gamma"] = input_entry(o.gamma_file);
            r = kf::check_metrizable(kf::io::read_matrix_file(o.gamma_file), o.tol);
        } else {
            if (o.kernel_file.empty() || o.points_file.empty())
                throw std::invalid_argument(
                    "need --gamma, or --kernel (site kernel) with --points");
            report["inputs"]["kernel"] = input_entry(o.kernel_file);
            const kf::SiteCnd gamma = kf::io::parse_site_cnd(
                kf::io::json::parse(kf::io::read_file(o.kernel_file)));
            const auto points = load_points(o, nullptr, report, o.points_file);
            r = kf::check_metrizable(gamma, points, o.tol);
        }
        pass = r.verdict;
        report["verdicts"].push_back(class_report_json(r));
        report["tolerances"]["metrizable_tol"] = r.tol_used;
    } else if (predicate == "hyperbolic") {
        kf::SymMatrix beta = [&]() {
            if (!o.gamma_file.empty()) {
                report["inputs"]["gamma"] = input_entry(o.gamma_file);
                return kf::io::read_matrix_file(o.gamma_file);
            }
            if (o.points_file.empty())
                throw std::invalid_argument("need --gamma (beta matrix) or --points");
            CommonOpts po = o;
            const auto pts = load_points(po, nullptr, report, o.points_file);
            const int n = static_cast<int>(pts.size());
            kf::SymMatrix m(n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) m.set(i, j, kf::minkowski_form(pts[i], pts[j]));
            return m;
        }();
        const kf::ClassReport r = kf::check_hyperbolic(beta, o.tol > 0 ? o.tol : 1e-8);
        pass = r.verdict;
        report["verdicts"].push_back(class_report_json(r));
        report["tolerances"]["hyperbolic_tol"] = r.tol_used;
    } else if (predicate == "log-conditional") {
        if (o.gamma_file.empty()) throw std::invalid_argument("need --gamma (L matrix)");
        report["inputs"]["gamma"] = input_entry(o.gamma_file);
        const kf::SymMatrix L = kf::io::read_matrix_file(o.gamma_file);
        const kf::LogConditionalReport r = kf::check_log_conditional(L, o.tol);
        pass = r.verdict;
        ojson v;
        v["predicate"] = "log_conditional";
        v["verdict"] = r.verdict;
        v["lambda_max_projected"] = r.cnd.lambda_max_projected;
        v["tol_used"] = r.cnd.tol_used;
        report["verdicts"].push_back(v);
        report["verdicts"].push_back(class_report_json(r.metrizable));
        report["tolerances"]["cnd_tol"] = r.cnd.tol_used;
    } else if (predicate == "cm" || predicate == "bernstein") {
        if (o.kernel_file.empty())
            throw std::invalid_argument("need --kernel (scalar function descriptor)");
        report["inputs"]["kernel"] = input_entry(o.kernel_file);
        const kf::ScalarFn fn =
            kf::io::parse_scalar_fn(kf::io::json::parse(kf::io::read_file(o.kernel_file)));
        std::vector<double> grid = fn.native_grid();
        if (grid.empty()) grid = kf::geometric_grid(0.1, 10.0);
        const auto probe = [&](auto&& f) {
            return predicate == "cm" ? kf::probe_completely_monotone(f, grid, order)
                                     : kf::probe_bernstein(f, grid, order);
        };
        const kf::MonotonicityReport r = probe([&](double t) { return fn(t); });
        pass = r.pass();
        ojson v;
        v["predicate"] = predicate;
        v["verdict"] = pass;
        v["order_checked"] = r.order_checked;
        v["tol_used"] = r.tol_used;
        ojson viols = ojson::array();
        for (const auto& violation : r.violations) {
            ojson x;
            x["order"] = violation.order;
            x["grid_point"] = violation.grid_point;
            x["value"] = violation.value;
            viols.push_back(x);
        }
        v["violations"] = viols;
        report["verdicts"].push_back(v);
        report["tolerances"]["probe_tol"] = r.tol_used;
    } else {
        throw std::invalid_argument("unknown predicate \"" + predicate + "\"");
    }

    emit(report);
    return pass ? kExitPass : kExitPredicateFail;
}

// --- embed -----------------------------------------------------------------

int cmd_embed(const CommonOpts& o, int base) {
    ojson report = report_header("embed", o.seed);
    const kf::SymMatrix g = gamma_matrix_from_inputs(o, report);

    // the hyperplane predicate is vacuous on a single point
    if (g.size() >= 2) {
        const kf::CndReport cnd = kf::check_cnd(g, o.tol);
        report["tolerances"]["cnd_tol"] = cnd.tol_used;
        if (!cnd.is_cnd) {
            ojson v;
            v["predicate"] = "cnd";
            v["verdict"] = false;
            v["lambda_max_projected"] = cnd.lambda_max_projected;
            report["verdicts"].push_back(v);
            emit(report);
            return kExitPredicateFail;
        }
    }

    const kf::Embedding e = kf::embed(g, base);
    double recon = 0.0;
    for (int i = 0; i < e.n; ++i)
        for (int j = 0; j < e.n; ++j)
            recon = std::max(recon, std::abs(g(i, j) - e.reconstruct(i, j)));
    report["numbers"]["n"] = e.n;
    report["numbers"]["rank"] = e.rank;
    report["numbers"]["base_index"] = e.base_index;
    report["numbers"]["max_reconstruction_error"] = recon;

    if (!o.out_file.empty()) {
        std::string csv;
        for (int k = 0; k < e.rank; ++k) csv += "h" + std::to_string(k) + ",";
        csv += "f\n";
        for (int i = 0; i < e.n; ++i) {
            for (int k = 0; k < e.rank; ++k) csv += kf::io::format_double(e.coord(i, k)) + ",";
            csv += kf::io::format_double(e.f[i]) + "\n";
        }
        kf::io::write_file(o.out_file, csv);
        ojson out;
        out["path"] = o.out_file;
        out["fnv1a64"] = kf::io::file_digest(o.out_file);
        report["outputs"] = ojson::object();
        report["outputs"]["coordinates"] = out;
    }
    emit(report);
    return kExitPass;
}

// --- matern ----------------------------------------------------------------

int cmd_matern(const CommonOpts& o, double r, double alpha, double nu, bool oracle) {
    ojson report = report_header("matern", o.seed);
    const kf::MaternParams params{alpha, nu};
    const double closed = kf::matern(r, params);
    report["numbers"]["r"] = r;
    report["numbers"]["alpha"] = alpha;
    report["numbers"]["nu"] = nu;
    report["numbers"]["value"] = closed;
    if (oracle) {
        const double quad = kf::matern_oracle(r, params);
        report["numbers"]["oracle_value"] = quad;
        report["numbers"]["relative_gap"] =
            std::abs(closed - quad) / std::max(std::abs(closed), 1e-300);
    }
    emit(report);
    return kExitPass;
}

// --- mmd -------------------------------------------------------------------

int cmd_mmd(const CommonOpts& o, const std::string& file_a, const std::string& file_b) {
    ojson report = report_header("mmd", o.seed);
    report["inputs"]["kernel"] = input_entry(o.kernel_file);
    const kf::KernelSpec spec = kf::io::load_kernel_file(o.kernel_file);

    kf::io::PointParseOptions popts;
    popts.lift = o.lift;
    kf::io::SiteTable sites;
    if (!o.sites_file.empty()) {
        sites = kf::io::read_sites_csv(o.sites_file);
        popts.sites = &sites;
        report["inputs"]["sites"] = input_entry(o.sites_file);
    }
    if (const auto* fl = spec.get_if<kf::KernelSpec::Flatten>())
        popts.channels = fl->kernel.channels();

    report["inputs"]["sample_a"] = input_entry(file_a);
    report["inputs"]["sample_b"] = input_entry(file_b);
    const auto a = kf::io::read_points_csv(file_a, popts);
    const auto b = kf::io::read_points_csv(file_b, popts);

    report["numbers"]["n_a"] = a.size();
    report["numbers"]["n_b"] = b.size();
    report["numbers"]["mmd"] = kf::mmd_distance(spec, a, b);
    emit(report);
    return kExitPass;
}

// --- classify-matrix-gaussian ----------------------------------------------

int cmd_classify_matrix_gaussian(const CommonOpts& o) {
    ojson report = report_header("classify-matrix-gaussian", o.seed);
    report["inputs"]["a"] = input_entry(o.a_file);
    report["inputs"]["gamma"] = input_entry(o.gamma_file);
    const kf::MatrixGaussianInstance inst{kf::io::read_matrix_file(o.a_file),
                                          kf::io::read_matrix_file(o.gamma_file), o.m};
    const kf::MatrixGaussianReport r = kf::classify_matrix_gaussian(inst, o.tol);
    report["tolerances"]["class_tol"] = r.tol_used;
    ojson v;
    v["predicate"] = "matrix_gaussian";
    v["spd"] = r.spd;
    v["c0_universal"] = r.c0_universal;
    ojson classes = ojson::array();
    for (const auto& cls : r.classes) {
        ojson one = ojson::array();
        for (int i : cls) one.push_back(i + 1); // 1-based channel labels
        classes.push_back(one);
    }
    v["classes"] = classes;
    if (r.failing_class) {
        ojson fc = ojson::array();
        for (int i : *r.failing_class) fc.push_back(i + 1);
        v["failing_class"] = fc;
    }
    report["verdicts"].push_back(v);
    report["numbers"]["m"] = o.m;
    emit(report);
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kernel constructions and finite-sample structural predicates"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string check_flag;
    std::string predicate;
    std::string file_a, file_b;
    int order = 6;
    int base = 0;
    double r = 0.0, alpha = 1.0, nu = 0.5;
    bool oracle = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", o.seed, "random seed echoed into the report");
        cmd->add_option("--tol", o.tol, "tolerance override");
        cmd->add_option("--out", o.out_file, "output file path");
        cmd->add_option("--format", o.format, "output file format")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--sites", o.sites_file, "site table CSV for product points");
        cmd->add_flag("--lift", o.lift, "treat point rows as chart coordinates");
    };

    CLI::App* gram = app.add_subcommand("gram", "assemble a Gram matrix and classify it");
    gram->add_option("--kernel", o.kernel_file, "kernel JSON file")->required();
    gram->add_option("--points", o.points_file, "points CSV file")->required();
    gram->add_option("--check", check_flag, "fail unless the Gram is pd/psd")
        ->check(CLI::IsMember({"pd", "psd"}));
    add_common(gram);

    CLI::App* check = app.add_subcommand("check", "run a structural predicate");
    check->add_option("predicate", predicate, "cnd|metrizable|hyperbolic|log-conditional|cm|bernstein")
        ->required();
    check->add_option("--gamma", o.gamma_file, "matrix CSV/JSON input");
    check->add_option("--kernel", o.kernel_file, "descriptor JSON input");
    check->add_option("--points", o.points_file, "points CSV file");
    check->add_option("--order", order, "divided-difference order for cm/bernstein");
    add_common(check);

    CLI::App* embed = app.add_subcommand("embed", "factor a CND kernel into coordinates");
    embed->add_option("--gamma", o.gamma_file, "matrix CSV/JSON input");
    embed->add_option("--kernel", o.kernel_file, "site kernel JSON input");
    embed->add_option("--points", o.points_file, "points CSV file");
    embed->add_option("--base", base, "anchor point index");
    add_common(embed);

    CLI::App* matern = app.add_subcommand("matern", "evaluate the radial smoothness family");
    matern->add_option("--r", r, "distance")->required();
    matern->add_option("--alpha", alpha, "inverse scale")->required();
    matern->add_option("--nu", nu, "smoothness")->required();
    matern->add_flag("--oracle", oracle, "also run the quadrature route and report the gap");
    add_common(matern);

    CLI::App* mmd = app.add_subcommand("mmd", "kernel distance between two samples");
    mmd->add_option("--kernel", o.kernel_file, "kernel JSON file")->required();
    mmd->add_option("sample_a", file_a, "first sample CSV")->required();
    mmd->add_option("sample_b", file_b, "second sample CSV")->required();
    add_common(mmd);

    CLI::App* cmg = app.add_subcommand("classify-matrix-gaussian",
                                       "strictness and degeneracy classes of a channel instance");
    cmg->add_option("--a", o.a_file, "coefficient matrix file")->required();
    cmg->add_option("--gamma", o.gamma_file, "scale matrix file")->required();
    cmg->add_option("--m", o.m, "spatial dimension")->required();
    add_common(cmg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (gram->parsed()) return cmd_gram(o, check_flag);
        if (check->parsed()) return cmd_check(o, predicate, order);
        if (embed->parsed()) return cmd_embed(o, base);
        if (matern->parsed()) return cmd_matern(o, r, alpha, nu, oracle);
        if (mmd->parsed()) return cmd_mmd(o, file_a, file_b);
        if (cmg->parsed()) return cmd_classify_matrix_gaussian(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
