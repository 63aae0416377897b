#include "kernelforge/io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "kernelforge/families.hpp"
#include "kernelforge/hyperbolic.hpp"

namespace kf::io {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void check_keys(const json& j, const std::vector<std::string>& allowed,
                const std::string& where) {
    if (!j.is_object()) fail(where + ": expected a JSON object");
    for (const auto& [key, _] : j.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            fail(where + ": unknown field \"" + key + "\"");
}

double need_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number())
        fail(where + ": missing numeric field \"" + key + "\"");
    return j[key].get<double>();
}

int need_int(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number_integer())
        fail(where + ": missing integer field \"" + key + "\"");
    return j[key].get<int>();
}

std::string need_string(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_string())
        fail(where + ": missing string field \"" + key + "\"");
    return j[key].get<std::string>();
}

std::vector<double> need_vector(const json& j, const std::string& key,
                                const std::string& where) {
    if (!j.contains(key) || !j[key].is_array())
        fail(where + ": missing array field \"" + key + "\"");
    std::vector<double> v;
    for (const auto& x : j[key]) {
        if (!x.is_number()) fail(where + ": \"" + key + "\" must hold numbers");
        v.push_back(x.get<double>());
    }
    return v;
}

SymMatrix need_matrix(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_array())
        fail(where + ": missing matrix field \"" + key + "\"");
    std::vector<std::vector<double>> rows;
    for (const auto& r : j[key]) {
        if (!r.is_array()) fail(where + ": \"" + key + "\" must be a 2-d array");
        rows.emplace_back();
        for (const auto& x : r) rows.back().push_back(x.get<double>());
    }
    return SymMatrix::from_rows(rows);
}

std::vector<Point> need_euclidean_points(const json& j, const std::string& key,
                                         const std::string& where) {
    if (!j.contains(key) || !j[key].is_array())
        fail(where + ": missing point-list field \"" + key + "\"");
    std::vector<Point> pts;
    for (const auto& p : j[key]) {
        if (!p.is_array()) fail(where + ": points must be coordinate arrays");
        std::vector<double> c;
        for (const auto& x : p) c.push_back(x.get<double>());
        pts.push_back(Point::euclidean(std::move(c)));
    }
    return pts;
}

json points_to_json(const std::vector<Point>& pts) {
    json out = json::array();
    for (const auto& p : pts) out.push_back(p.as_euclidean().coords);
    return out;
}

std::vector<std::pair<double, double>> need_atoms(const json& j, const std::string& where) {
    if (!j.contains("atoms") || !j["atoms"].is_array()) fail(where + ": missing \"atoms\"");
    std::vector<std::pair<double, double>> atoms;
    for (const auto& a : j["atoms"]) {
        if (!a.is_array() || a.size() != 2) fail(where + ": atoms must be [weight, rate] pairs");
        atoms.emplace_back(a[0].get<double>(), a[1].get<double>());
    }
    return atoms;
}

} // namespace

// ---------------------------------------------------------------------------
// descriptors
// ---------------------------------------------------------------------------

ScalarFn parse_scalar_fn(const json& j) {
    const std::string fn = need_string(j, "fn", "scalar function");
    if (fn == "exp_decay") {
        check_keys(j, {"fn", "c"}, fn);
        return ScalarFn::exp_decay(need_number(j, "c", fn));
    }
    if (fn == "power_decay") {
        check_keys(j, {"fn", "c", "tau"}, fn);
        return ScalarFn::power_decay(need_number(j, "c", fn), need_number(j, "tau", fn));
    }
    if (fn == "power") {
        check_keys(j, {"fn", "beta"}, fn);
        return ScalarFn::power(need_number(j, "beta", fn));
    }
    if (fn == "affine") {
        check_keys(j, {"fn", "a", "b"}, fn);
        return ScalarFn::affine(need_number(j, "a", fn), need_number(j, "b", fn));
    }
    if (fn == "bern_power") {
        check_keys(j, {"fn", "a", "beta"}, fn);
        return ScalarFn::bern_power(need_number(j, "a", fn), need_number(j, "beta", fn));
    }
    if (fn == "log_e_plus") {
        check_keys(j, {"fn"}, fn);
        return ScalarFn::log_e_plus();
    }
    if (fn == "log1p") {
        check_keys(j, {"fn"}, fn);
        return ScalarFn::log1p_fn();
    }
    if (fn == "sech_power") {
        check_keys(j, {"fn", "r"}, fn);
        return ScalarFn::sech_pow(need_number(j, "r", fn));
    }
    if (fn == "table") {
        check_keys(j, {"fn", "t", "v"}, fn);
        return ScalarFn::table(need_vector(j, "t", fn), need_vector(j, "v", fn));
    }
    fail("scalar function: unknown \"fn\" value \"" + fn + "\"");
}

ojson scalar_fn_to_json(const ScalarFn& f) {
    ojson j;
    std::visit(overloaded{
                   [&](const ScalarFn::ExpDecay& v) { j["fn"] = "exp_decay"; j["c"] = v.c; },
                   [&](const ScalarFn::PowerDecay& v) {
                       j["fn"] = "power_decay"; j["c"] = v.c; j["tau"] = v.tau;
                   },
                   [&](const ScalarFn::Power& v) { j["fn"] = "power"; j["beta"] = v.beta; },
                   [&](const ScalarFn::Affine& v) { j["fn"] = "affine"; j["a"] = v.a; j["b"] = v.b; },
                   [&](const ScalarFn::BernPower& v) {
                       j["fn"] = "bern_power"; j["a"] = v.a; j["beta"] = v.beta;
                   },
                   [&](const ScalarFn::LogEPlus&) { j["fn"] = "log_e_plus"; },
                   [&](const ScalarFn::Log1p&) { j["fn"] = "log1p"; },
                   [&](const ScalarFn::SechPow& v) { j["fn"] = "sech_power"; j["r"] = v.r; },
                   [&](const ScalarFn::Table& v) { j["fn"] = "table"; j["t"] = v.t; j["v"] = v.v; },
               },
               f.node());
    return j;
}

WeightFn parse_weight(const json& j) {
    const std::string w = need_string(j, "weight", "weight");
    if (w == "constant") {
        check_keys(j, {"weight", "c"}, "weight");
        return WeightFn::constant(need_number(j, "c", "weight"));
    }
    if (w == "coord_affine") {
        check_keys(j, {"weight", "a", "b"}, "weight");
        return WeightFn::coord_affine(need_vector(j, "a", "weight"),
                                      need_number(j, "b", "weight"));
    }
    if (w == "norm_exp") {
        check_keys(j, {"weight", "c"}, "weight");
        return WeightFn::norm_exp(need_number(j, "c", "weight"));
    }
    if (w == "table") {
        check_keys(j, {"weight", "points", "values"}, "weight");
        return WeightFn::table(need_euclidean_points(j, "points", "weight"),
                               need_vector(j, "values", "weight"));
    }
    fail("weight: unknown \"weight\" value \"" + w + "\"");
}

ojson weight_to_json(const WeightFn& w) {
    ojson j;
    std::visit(overloaded{
                   [&](const WeightFn::Constant& v) { j["weight"] = "constant"; j["c"] = v.c; },
                   [&](const WeightFn::CoordAffine& v) {
                       j["weight"] = "coord_affine"; j["a"] = v.a; j["b"] = v.b;
                   },
                   [&](const WeightFn::NormExp& v) { j["weight"] = "norm_exp"; j["c"] = v.c; },
                   [&](const WeightFn::Table& v) {
                       j["weight"] = "table";
                       j["points"] = points_to_json(v.points);
                       j["values"] = v.values;
                   },
               },
               w.node());
    return j;
}

MapFn parse_map(const json& j) {
    const std::string m = need_string(j, "map", "map");
    if (m == "identity") {
        check_keys(j, {"map"}, "map");
        return MapFn::identity();
    }
    if (m == "scale") {
        check_keys(j, {"map", "s"}, "map");
        return MapFn::scale(need_number(j, "s", "map"));
    }
    if (m == "affine") {
        check_keys(j, {"map", "matrix", "offset"}, "map");
        std::vector<std::vector<double>> rows;
        for (const auto& r : j["matrix"]) {
            rows.emplace_back();
            for (const auto& x : r) rows.back().push_back(x.get<double>());
        }
        return MapFn::affine(std::move(rows), need_vector(j, "offset", "map"));
    }
    if (m == "constant") {
        check_keys(j, {"map", "point"}, "map");
        return MapFn::constant_point(need_vector(j, "point", "map"));
    }
    fail("map: unknown \"map\" value \"" + m + "\"");
}

ojson map_to_json(const MapFn& m) {
    ojson j;
    std::visit(overloaded{
                   [&](const MapFn::Identity&) { j["map"] = "identity"; },
                   [&](const MapFn::Scale& v) { j["map"] = "scale"; j["s"] = v.s; },
                   [&](const MapFn::Affine& v) {
                       j["map"] = "affine"; j["matrix"] = v.matrix; j["offset"] = v.offset;
                   },
                   [&](const MapFn::ConstantPoint& v) { j["map"] = "constant"; j["point"] = v.coords; },
               },
               m.node());
    return j;
}

SiteCnd parse_site_cnd(const json& j) {
    const std::string c = need_string(j, "cnd", "site kernel");
    if (c == "sq_dist") {
        check_keys(j, {"cnd", "offset", "scale"}, "site kernel");
        return SiteCnd::sq_dist(need_number(j, "offset", "site kernel"),
                                need_number(j, "scale", "site kernel"));
    }
    if (c == "constant") {
        check_keys(j, {"cnd", "c"}, "site kernel");
        return SiteCnd::constant(need_number(j, "c", "site kernel"));
    }
    if (c == "table") {
        check_keys(j, {"cnd", "points", "values"}, "site kernel");
        return SiteCnd::table(need_euclidean_points(j, "points", "site kernel"),
                              need_matrix(j, "values", "site kernel"));
    }
    fail("site kernel: unknown \"cnd\" value \"" + c + "\"");
}

ojson site_cnd_to_json(const SiteCnd& c) {
    ojson j;
    std::visit(overloaded{
                   [&](const SiteCnd::SqDist& v) {
                       j["cnd"] = "sq_dist"; j["offset"] = v.offset; j["scale"] = v.scale;
                   },
                   [&](const SiteCnd::Constant& v) { j["cnd"] = "constant"; j["c"] = v.c; },
                   [&](const SiteCnd::Table& v) {
                       j["cnd"] = "table";
                       j["points"] = points_to_json(v.points);
                       j["values"] = matrix_to_json(v.values);
                   },
               },
               c.node());
    return j;
}

LogCond parse_log_cond(const json& j) {
    const std::string l = need_string(j, "L", "log-conditional kernel");
    if (l == "constant") {
        check_keys(j, {"L", "c"}, "log-conditional kernel");
        return LogCond::constant(need_number(j, "c", "log-conditional kernel"));
    }
    if (l == "minkowski") {
        check_keys(j, {"L"}, "log-conditional kernel");
        return LogCond::minkowski();
    }
    if (l == "exp_cnd") {
        check_keys(j, {"L", "gamma"}, "log-conditional kernel");
        return LogCond::exp_cnd(parse_site_cnd(j["gamma"]));
    }
    if (l == "affine_sq") {
        check_keys(j, {"L", "offset", "scale", "power"}, "log-conditional kernel");
        return LogCond::affine_sq_pow(need_number(j, "offset", "log-conditional kernel"),
                                      need_number(j, "scale", "log-conditional kernel"),
                                      need_number(j, "power", "log-conditional kernel"));
    }
    fail("log-conditional kernel: unknown \"L\" value \"" + l + "\"");
}

ojson log_cond_to_json(const LogCond& l) {
    ojson j;
    std::visit(overloaded{
                   [&](const LogCond::Constant& v) { j["L"] = "constant"; j["c"] = v.c; },
                   [&](const LogCond::Minkowski&) { j["L"] = "minkowski"; },
                   [&](const LogCond::ExpCnd& v) {
                       j["L"] = "exp_cnd"; j["gamma"] = site_cnd_to_json(v.gamma);
                   },
                   [&](const LogCond::AffineSqPow& v) {
                       j["L"] = "affine_sq";
                       j["offset"] = v.offset;
                       j["scale"] = v.scale;
                       j["power"] = v.power;
                   },
               },
               l.node());
    return j;
}

MatrixKernel parse_matrix_kernel(const json& j) {
    const std::string f = need_string(j, "matrix_family", "matrix kernel");
    if (f == "constant") {
        check_keys(j, {"matrix_family", "a"}, "matrix kernel");
        return MatrixKernel(MatrixKernel::ConstantMat{need_matrix(j, "a", "matrix kernel")});
    }
    if (f == "matrix_gaussian") {
        check_keys(j, {"matrix_family", "a", "gamma"}, "matrix kernel");
        return MatrixKernel(MatrixKernel::MatrixGaussian{
            need_matrix(j, "a", "matrix kernel"), need_matrix(j, "gamma", "matrix kernel")});
    }
    if (f == "matern_product") {
        check_keys(j, {"matrix_family", "a", "gamma", "alphas", "nus", "m"}, "matrix kernel");
        return matern_product_matrix(need_matrix(j, "a", "matrix kernel"),
                                     parse_site_cnd(j["gamma"]),
                                     need_vector(j, "alphas", "matrix kernel"),
                                     need_vector(j, "nus", "matrix kernel"),
                                     need_int(j, "m", "matrix kernel"));
    }
    if (f == "matern_hilbert") {
        check_keys(j, {"matrix_family", "a", "gamma", "nus"}, "matrix kernel");
        return matern_hilbert_matrix(need_matrix(j, "a", "matrix kernel"),
                                     parse_site_cnd(j["gamma"]),
                                     need_vector(j, "nus", "matrix kernel"));
    }
    if (f == "gamma_power") {
        check_keys(j, {"matrix_family", "gamma", "nus"}, "matrix kernel");
        return gamma_power_matrix(parse_site_cnd(j["gamma"]),
                                  need_vector(j, "nus", "matrix kernel"));
    }
    fail("matrix kernel: unknown \"matrix_family\" value \"" + f + "\"");
}

ojson matrix_kernel_to_json(const MatrixKernel& k) {
    ojson j;
    std::visit(
        overloaded{
            [&](const MatrixKernel::ConstantMat& v) {
                j["matrix_family"] = "constant";
                j["a"] = matrix_to_json(v.a);
            },
            [&](const MatrixKernel::MatrixGaussian& v) {
                j["matrix_family"] = "matrix_gaussian";
                j["a"] = matrix_to_json(v.a);
                j["gamma"] = matrix_to_json(v.gamma);
            },
            [&](const MatrixKernel::MaternProduct& v) {
                j["matrix_family"] = "matern_product";
                j["a"] = matrix_to_json(v.a);
                j["gamma"] = site_cnd_to_json(v.gamma);
                j["alphas"] = v.alphas;
                j["nus"] = v.nus;
                j["m"] = v.m;
            },
            [&](const MatrixKernel::MaternHilbert& v) {
                j["matrix_family"] = "matern_hilbert";
                j["a"] = matrix_to_json(v.a);
                j["gamma"] = site_cnd_to_json(v.gamma);
                j["nus"] = v.nus;
            },
            [&](const MatrixKernel::GammaPower& v) {
                j["matrix_family"] = "gamma_power";
                j["gamma"] = site_cnd_to_json(v.gamma);
                j["nus"] = v.nus;
            },
        },
        k.node());
    return j;
}

// ---------------------------------------------------------------------------
// kernels
// ---------------------------------------------------------------------------

KernelSpec parse_kernel(const json& j) {
    if (!j.is_object()) fail("kernel: expected a JSON object");
    if (j.contains("family")) {
        const std::string f = j["family"].get<std::string>();
        if (f == "gaussian") {
            check_keys(j, {"family", "sigma"}, f);
            return gaussian(need_number(j, "sigma", f));
        }
        if (f == "cm_mixture") {
            check_keys(j, {"family", "atoms"}, f);
            return radial_cm_mixture(need_atoms(j, f));
        }
        if (f == "gneiting_classic") {
            check_keys(j, {"family", "g", "psi", "m"}, f);
            if (!j.contains("g") || !j.contains("psi")) fail(f + ": needs \"g\" and \"psi\"");
            return gneiting(GneitingClassicSpec{parse_scalar_fn(j["g"]),
                                                parse_scalar_fn(j["psi"]),
                                                need_int(j, "m", f)})
                .spec;
        }
        if (f == "gneiting_general") {
            check_keys(j, {"family", "a", "gamma", "m"}, f);
            if (!j.contains("a") || !j.contains("gamma")) fail(f + ": needs \"a\" and \"gamma\"");
            return gneiting(GneitingGeneralSpec{parse_kernel(j["a"]), parse_site_cnd(j["gamma"]),
                                                need_int(j, "m", f)})
                .spec;
        }
        if (f == "matern") {
            check_keys(j, {"family", "alpha", "nu"}, f);
            const double alpha = need_number(j, "alpha", f);
            const double nu = need_number(j, "nu", f);
            if (!(alpha > 0.0) || !(nu > 0.0)) fail(f + ": alpha and nu must be positive");
            return KernelSpec(KernelSpec::Matern{alpha, nu});
        }
        if (f == "sech_power") {
            check_keys(j, {"family", "r"}, f);
            return sech_power_kernel(need_number(j, "r", f));
        }
        if (f == "isotropic") {
            check_keys(j, {"family", "atoms"}, f);
            return isotropic_kernel(IsotropicAtoms{need_atoms(j, f)});
        }
        if (f == "inverse_log_conditional") {
            check_keys(j, {"family", "L"}, f);
            if (!j.contains("L")) fail(f + ": needs \"L\"");
            return inverse_kernel(parse_log_cond(j["L"]));
        }
        if (f == "gamma_power_matrix") {
            check_keys(j, {"family", "gamma", "nus"}, f);
            return flatten(gamma_power_matrix(parse_site_cnd(j["gamma"]),
                                              need_vector(j, "nus", f)));
        }
        if (f == "matern_matrix") {
            const std::string variant = need_string(j, "variant", f);
            if (variant == "product") {
                check_keys(j, {"family", "variant", "a", "gamma", "alphas", "nus", "m"}, f);
                return flatten(matern_product_matrix(
                    need_matrix(j, "a", f), parse_site_cnd(j["gamma"]),
                    need_vector(j, "alphas", f), need_vector(j, "nus", f), need_int(j, "m", f)));
            }
            if (variant == "hilbert") {
                check_keys(j, {"family", "variant", "a", "gamma", "nus"}, f);
                return flatten(matern_hilbert_matrix(need_matrix(j, "a", f),
                                                     parse_site_cnd(j["gamma"]),
                                                     need_vector(j, "nus", f)));
            }
            fail(f + ": unknown variant \"" + variant + "\"");
        }
        fail("kernel: unknown \"family\" value \"" + f + "\"");
    }
    if (j.contains("op")) {
        const std::string op = j["op"].get<std::string>();
        if (op == "schur" || op == "tensor") {
            check_keys(j, {"op", "left", "right"}, op);
            if (!j.contains("left") || !j.contains("right"))
                fail(op + ": needs \"left\" and \"right\"");
            const KernelSpec l = parse_kernel(j["left"]);
            const KernelSpec r = parse_kernel(j["right"]);
            return op == "schur" ? schur(l, r) : tensor(l, r);
        }
        if (op == "rescale") {
            check_keys(j, {"op", "inner", "weight"}, op);
            if (!j.contains("inner") || !j.contains("weight"))
                fail(op + ": needs \"inner\" and \"weight\"");
            return rescale(parse_kernel(j["inner"]), parse_weight(j["weight"]));
        }
        if (op == "pullback") {
            check_keys(j, {"op", "inner", "map"}, op);
            if (!j.contains("inner") || !j.contains("map"))
                fail(op + ": needs \"inner\" and \"map\"");
            return pullback(parse_kernel(j["inner"]), parse_map(j["map"]));
        }
        if (op == "mixture") {
            check_keys(j, {"op", "atoms"}, op);
            if (!j.contains("atoms") || !j["atoms"].is_array()) fail(op + ": needs \"atoms\"");
            std::vector<std::pair<double, KernelSpec>> atoms;
            for (const auto& a : j["atoms"]) {
                check_keys(a, {"weight", "kernel"}, "mixture atom");
                if (!a.contains("kernel")) fail("mixture atom: needs \"kernel\"");
                atoms.emplace_back(need_number(a, "weight", "mixture atom"),
                                   parse_kernel(a["kernel"]));
            }
            return mixture(std::move(atoms));
        }
        if (op == "flatten") {
            check_keys(j, {"op", "kernel"}, op);
            if (!j.contains("kernel")) fail(op + ": needs \"kernel\"");
            return flatten(parse_matrix_kernel(j["kernel"]));
        }
        fail("kernel: unknown \"op\" value \"" + op + "\"");
    }
    fail("kernel: needs a \"family\" or \"op\" discriminator");
}

ojson kernel_to_json(const KernelSpec& spec) {
    ojson j;
    std::visit(
        overloaded{
            [&](const KernelSpec::Gaussian& k) {
                j["family"] = "gaussian";
                j["sigma"] = k.sigma;
            },
            [&](const KernelSpec::CmMixture& k) {
                j["family"] = "cm_mixture";
                ojson atoms = ojson::array();
                for (const auto& [w, r] : k.atoms) atoms.push_back({w, r});
                j["atoms"] = atoms;
            },
            [&](const KernelSpec::GneitingClassic& k) {
                j["family"] = "gneiting_classic";
                j["g"] = scalar_fn_to_json(k.g);
                j["psi"] = scalar_fn_to_json(k.psi);
                j["m"] = k.m;
            },
            [&](const KernelSpec::GneitingGeneral& k) {
                j["family"] = "gneiting_general";
                j["a"] = kernel_to_json(*k.site_kernel);
                j["gamma"] = site_cnd_to_json(k.gamma);
                j["m"] = k.m;
            },
            [&](const KernelSpec::Matern& k) {
                j["family"] = "matern";
                j["alpha"] = k.alpha;
                j["nu"] = k.nu;
            },
            [&](const KernelSpec::SechPower& k) {
                j["family"] = "sech_power";
                j["r"] = k.r;
            },
            [&](const KernelSpec::Isotropic& k) {
                j["family"] = "isotropic";
                ojson atoms = ojson::array();
                for (const auto& [w, r] : k.atoms) atoms.push_back({w, r});
                j["atoms"] = atoms;
            },
            [&](const KernelSpec::InverseLogCond& k) {
                j["family"] = "inverse_log_conditional";
                j["L"] = log_cond_to_json(k.log_kernel);
            },
            [&](const KernelSpec::Schur& k) {
                j["op"] = "schur";
                j["left"] = kernel_to_json(*k.left);
                j["right"] = kernel_to_json(*k.right);
            },
            [&](const KernelSpec::Tensor& k) {
                j["op"] = "tensor";
                j["left"] = kernel_to_json(*k.left);
                j["right"] = kernel_to_json(*k.right);
            },
            [&](const KernelSpec::Rescale& k) {
                j["op"] = "rescale";
                j["inner"] = kernel_to_json(*k.inner);
                j["weight"] = weight_to_json(k.weight);
            },
            [&](const KernelSpec::Pullback& k) {
                j["op"] = "pullback";
                j["inner"] = kernel_to_json(*k.inner);
                j["map"] = map_to_json(k.map);
            },
            [&](const KernelSpec::Mixture& k) {
                j["op"] = "mixture";
                ojson atoms = ojson::array();
                for (const auto& [w, s] : k.atoms) {
                    ojson a;
                    a["weight"] = w;
                    a["kernel"] = kernel_to_json(*s);
                    atoms.push_back(a);
                }
                j["atoms"] = atoms;
            },
            [&](const KernelSpec::Flatten& k) {
                j["op"] = "flatten";
                j["kernel"] = matrix_kernel_to_json(k.kernel);
            },
        },
        spec.node());
    return j;
}

KernelSpec load_kernel_file(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        fail(path + ": " + e.what());
    }
    return parse_kernel(j);
}

// ---------------------------------------------------------------------------
// files, matrices, CSV
// ---------------------------------------------------------------------------

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("cannot write " + path);
    out << bytes;
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string file_digest(const std::string& path) { return fnv1a64_hex(read_file(path)); }

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& s : out) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
    }
    return out;
}

double parse_number(const std::string& s, const std::string& path, int line, int col) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(path + ":" + std::to_string(line) + ": field " + std::to_string(col + 1) +
             " is not a number (\"" + s + "\")");
    }
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::istringstream in(read_file(path));
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        rows.push_back(split_csv_line(line));
    }
    return rows;
}

bool is_number_token(const std::string& s) {
    if (s.empty()) return false;
    std::size_t used = 0;
    try {
        (void)std::stod(s, &used);
    } catch (const std::exception&) {
        return false;
    }
    return used == s.size();
}

} // namespace

SymMatrix read_matrix_file(const std::string& path) {
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        json j;
        try {
            j = json::parse(read_file(path));
        } catch (const json::parse_error& e) {
            fail(path + ": " + e.what());
        }
        json wrap;
        wrap["m"] = j;
        return need_matrix(wrap, "m", path);
    }
    const auto rows = read_csv(path);
    if (rows.empty()) fail(path + ": empty matrix file");
    std::vector<std::vector<double>> vals;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        vals.emplace_back();
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            vals.back().push_back(
                parse_number(rows[r][c], path, static_cast<int>(r + 1), static_cast<int>(c)));
    }
    return SymMatrix::from_rows(vals);
}

void write_matrix_csv(const std::string& path, const SymMatrix& m) {
    std::ostringstream os;
    for (int i = 0; i < m.size(); ++i) {
        for (int j = 0; j < m.size(); ++j) {
            if (j) os << ",";
            os << format_double(m(i, j));
        }
        os << "\n";
    }
    write_file(path, os.str());
}

ojson matrix_to_json(const SymMatrix& m) {
    ojson rows = ojson::array();
    for (int i = 0; i < m.size(); ++i) {
        ojson row = ojson::array();
        for (int j = 0; j < m.size(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

const Point& SiteTable::lookup(const std::string& id) const {
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == id) return points[i];
    fail("site table: unknown site_id \"" + id + "\"");
}

SiteTable read_sites_csv(const std::string& path) {
    const auto rows = read_csv(path);
    if (rows.size() < 2) fail(path + ": site table needs a header and at least one site");
    const auto& header = rows[0];
    if (header.empty() || header[0] != "site_id")
        fail(path + ": site table header must start with site_id");
    SiteTable t;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != header.size())
            fail(path + ":" + std::to_string(r + 1) + ": wrong field count");
        t.ids.push_back(rows[r][0]);
        std::vector<double> coords;
        for (std::size_t c = 1; c < rows[r].size(); ++c)
            coords.push_back(parse_number(rows[r][c], path, static_cast<int>(r + 1),
                                          static_cast<int>(c)));
        t.points.push_back(Point::euclidean(std::move(coords)));
    }
    return t;
}

namespace {

struct CsvLayout {
    int channel_col = -1;
    int site_col = -1;
    int t_col = -1;
    int weight_col = -1;
    std::vector<int> coord_cols;
};

CsvLayout parse_header(const std::vector<std::string>& header, bool expect_weight,
                       const std::string& path) {
    CsvLayout l;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string& h = header[c];
        if (h == "channel")
            l.channel_col = static_cast<int>(c);
        else if (h == "site_id")
            l.site_col = static_cast<int>(c);
        else if (h == "t")
            l.t_col = static_cast<int>(c);
        else if (h == "weight")
            l.weight_col = static_cast<int>(c);
        else
            l.coord_cols.push_back(static_cast<int>(c));
    }
    if (expect_weight && l.weight_col < 0) fail(path + ": measure file needs a weight column");
    if (!expect_weight && l.weight_col >= 0) fail(path + ": unexpected weight column");
    return l;
}

Point build_point(const std::vector<std::string>& row, const CsvLayout& l,
                  const PointParseOptions& opts, const std::string& path, int line) {
    std::vector<double> coords;
    for (int c : l.coord_cols)
        coords.push_back(parse_number(row[c], path, line, c));

    Point base = [&]() {
        if (l.site_col >= 0) {
            if (!opts.sites) fail(path + ": file has site_id column but no site table given");
            return Point::product(opts.sites->lookup(row[l.site_col]), std::move(coords));
        }
        if (l.t_col >= 0) {
            if (opts.lift) fail(path + ": ambient t column and lift flag are exclusive");
            const double t = parse_number(row[l.t_col], path, line, l.t_col);
            try {
                return Point::hyperboloid(std::move(coords), t);
            } catch (const std::invalid_argument& e) {
                fail(path + ":" + std::to_string(line) + ": " + e.what());
            }
        }
        if (opts.lift) return lift(coords);
        return Point::euclidean(std::move(coords));
    }();

    if (l.channel_col >= 0) {
        if (opts.channels <= 0)
            fail(path + ": channel column present but kernel is not channel-valued");
        const double ch = parse_number(row[l.channel_col], path, line, l.channel_col);
        const int c = static_cast<int>(ch);
        if (c != ch || c < 1 || c > opts.channels)
            fail(path + ":" + std::to_string(line) + ": channel index out of range");
        return Point::channel(std::move(base), c, opts.channels);
    }
    if (opts.channels > 0)
        fail(path + ": kernel is channel-valued but the file has no channel column");
    return base;
}

} // namespace

std::vector<Point> read_points_csv(const std::string& path, const PointParseOptions& opts) {
    const auto rows = read_csv(path);
    if (rows.empty()) fail(path + ": empty points file");
    if (rows.size() < 2) fail(path + ": no data rows");
    // headers are mandatory; a fully numeric first row is a likely mistake
    bool numeric_header = true;
    for (const auto& h : rows[0]) numeric_header = numeric_header && is_number_token(h);
    if (numeric_header) fail(path + ": first row must be a header");

    const CsvLayout layout = parse_header(rows[0], false, path);
    std::vector<Point> pts;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size())
            fail(path + ":" + std::to_string(r + 1) + ": wrong field count");
        pts.push_back(build_point(rows[r], layout, opts, path, static_cast<int>(r + 1)));
    }
    return pts;
}

DiscreteMeasure read_measure_csv(const std::string& path, const PointParseOptions& opts) {
    const auto rows = read_csv(path);
    if (rows.size() < 2) fail(path + ": measure file needs a header and data rows");
    const CsvLayout layout = parse_header(rows[0], true, path);
    DiscreteMeasure m;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size())
            fail(path + ":" + std::to_string(r + 1) + ": wrong field count");
        const double w = parse_number(rows[r][layout.weight_col], path,
                                      static_cast<int>(r + 1), layout.weight_col);
        m.atoms.emplace_back(build_point(rows[r], layout, opts, path, static_cast<int>(r + 1)),
                             w);
    }
    return m;
}

} // namespace kf::io
