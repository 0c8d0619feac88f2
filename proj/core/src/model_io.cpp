#include "evpos/model_io.hpp"

#include "evpos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace evpos {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw SchemaError(where, "expected an object");
}

void allow_fields(const json& j, const std::string& where,
                  std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : j.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw SchemaError(where + "." + key, "unknown field");
}

const json& field(const json& j, const std::string& where, const char* name) {
    const auto it = j.find(name);
    if (it == j.end()) throw SchemaError(where + "." + name, "missing required field");
    return *it;
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw SchemaError(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw SchemaError(where, "not finite");
    return v;
}

std::size_t count(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
        throw SchemaError(where, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

std::vector<double> reals(const json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError(where, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < j.size(); ++k)
        out.push_back(number(j[k], where + "[" + std::to_string(k) + "]"));
    return out;
}

std::string kind_of(const json& j, const std::string& where) {
    const json& k = field(j, where, "kind");
    if (!k.is_string()) throw SchemaError(where + ".kind", "expected a string");
    return k.get<std::string>();
}

// Library validation errors surface as schema errors at the descriptor path.
template <class F>
auto guarded(const std::string& where, F&& f) {
    try {
        return f();
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        throw SchemaError(where, e.what());
    }
}

void check_norm_dimension(const Norm& norm, std::size_t n, const std::string& where) {
    if (const auto d = norm.dimension(); d && *d != n)
        throw SchemaError(where, "norm samples " + std::to_string(*d) + " nodes but the model has dimension " +
                                     std::to_string(n));
}

}  // namespace

json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, column = 1;
        const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t k = 0; k < end; ++k) {
            if (text[k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw SchemaError(source, "JSON syntax error at line " + std::to_string(line) +
                                      ", column " + std::to_string(column));
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

// ------------------------------------------------------------- scalars

Complex complex_from_json(const json& j, const std::string& where) {
    if (j.is_number()) return {number(j, where), 0.0};
    if (j.is_array() && j.size() == 2)
        return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
    throw SchemaError(where, "expected a number or a [re, im] pair");
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

CVector cvector_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError(where, "expected an array");
    CVector out;
    for (std::size_t k = 0; k < j.size(); ++k)
        out.push_back(complex_from_json(j[k], where + "[" + std::to_string(k) + "]"));
    return out;
}

json cvector_to_json(std::span<const Complex> v) {
    json out = json::array();
    for (const auto& z : v) out.push_back(complex_to_json(z));
    return out;
}

ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
    require_object(j, where);
    allow_fields(j, where, {"n", "entries"});
    const std::size_t n = count(field(j, where, "n"), where + ".n");
    if (n == 0) throw SchemaError(where + ".n", "must be positive");
    const CVector e = cvector_from_json(field(j, where, "entries"), where + ".entries");
    if (e.size() != n * n)
        throw SchemaError(where + ".entries", "expected " + std::to_string(n * n) +
                                                  " entries, found " + std::to_string(e.size()));
    ComplexMatrix a(n, n);
    std::copy(e.begin(), e.end(), a.data().begin());
    return a;
}

json matrix_to_json(const ComplexMatrix& a) {
    return {{"n", a.rows()}, {"entries", cvector_to_json(a.data())}};
}

// ---------------------------------------------------------------- norms

Norm norm_from_json(const json& j, const std::string& where) {
    require_object(j, where);
    const std::string kind = kind_of(j, where);
    return guarded(where, [&]() -> Norm {
        if (kind == "ell1" || kind == "ell2" || kind == "ell_inf") {
            allow_fields(j, where, {"kind"});
            return kind == "ell1" ? Norm::ell1() : kind == "ell2" ? Norm::ell2() : Norm::ell_inf();
        }
        if (kind == "lp_quadrature") {
            allow_fields(j, where, {"kind", "p", "nodes", "weights"});
            return Norm::lp_quadrature(number(field(j, where, "p"), where + ".p"),
                                       reals(field(j, where, "nodes"), where + ".nodes"),
                                       reals(field(j, where, "weights"), where + ".weights"));
        }
        if (kind == "lp_midpoint") {
            allow_fields(j, where, {"kind", "p", "cells"});
            return Norm::lp_midpoint(number(field(j, where, "p"), where + ".p"),
                                     count(field(j, where, "cells"), where + ".cells"));
        }
        if (kind == "grid_sup") {
            allow_fields(j, where, {"kind", "nodes"});
            return Norm::grid_sup(reals(field(j, where, "nodes"), where + ".nodes"));
        }
        if (kind == "grid_sup_uniform") {
            allow_fields(j, where, {"kind", "count"});
            return Norm::grid_sup_uniform(count(field(j, where, "count"), where + ".count"));
        }
        throw SchemaError(where + ".kind", "unknown norm kind '" + kind + "'");
    });
}

json norm_to_json(const Norm& norm) {
    return std::visit(overloaded{
                          [](const Ell1&) { return json{{"kind", "ell1"}}; },
                          [](const Ell2&) { return json{{"kind", "ell2"}}; },
                          [](const EllInf&) { return json{{"kind", "ell_inf"}}; },
                          [](const LpQuadrature& q) {
                              return json{{"kind", "lp_quadrature"},
                                          {"p", q.p},
                                          {"nodes", q.nodes},
                                          {"weights", q.weights}};
                          },
                          [](const GridSup& g) {
                              return json{{"kind", "grid_sup"}, {"nodes", g.nodes}};
                          },
                      },
                      norm.kind());
}

// ---------------------------------------------------- functions / functionals

FunctionRep function_from_json(const json& j, const std::string& where) {
    require_object(j, where);
    const std::string kind = kind_of(j, where);
    auto coefficient = [&] {
        return j.contains("coefficient") ? complex_from_json(j["coefficient"], where + ".coefficient")
                                         : Complex(1.0);
    };
    if (kind == "constant") {
        allow_fields(j, where, {"kind", "value"});
        return Constant{complex_from_json(field(j, where, "value"), where + ".value")};
    }
    if (kind == "monomial") {
        allow_fields(j, where, {"kind", "degree", "coefficient"});
        const std::size_t d = count(field(j, where, "degree"), where + ".degree");
        return Monomial{static_cast<unsigned>(d), coefficient()};
    }
    if (kind == "signed_power") {
        allow_fields(j, where, {"kind", "exponent", "coefficient"});
        return SignedPower{number(field(j, where, "exponent"), where + ".exponent"), coefficient()};
    }
    if (kind == "tabulated") {
        allow_fields(j, where, {"kind", "values"});
        return Tabulated{cvector_from_json(field(j, where, "values"), where + ".values")};
    }
    throw SchemaError(where + ".kind", "unknown function kind '" + kind + "'");
}

json function_to_json(const FunctionRep& f) {
    return std::visit(
        overloaded{
            [](const Constant& c) { return json{{"kind", "constant"}, {"value", complex_to_json(c.value)}}; },
            [](const Monomial& m) {
                return json{{"kind", "monomial"},
                            {"degree", m.degree},
                            {"coefficient", complex_to_json(m.coefficient)}};
            },
            [](const SignedPower& s) {
                return json{{"kind", "signed_power"},
                            {"exponent", s.exponent},
                            {"coefficient", complex_to_json(s.coefficient)}};
            },
            [](const Tabulated& t) { return json{{"kind", "tabulated"}, {"values", cvector_to_json(t.values)}}; },
        },
        f);
}

FunctionalRep functional_from_json(const json& j, const std::string& where) {
    require_object(j, where);
    const std::string kind = kind_of(j, where);
    if (kind == "weighted_integral") {
        allow_fields(j, where, {"kind", "weight", "scale"});
        WeightedIntegral w;
        if (j.contains("weight")) w.weight = function_from_json(j["weight"], where + ".weight");
        if (j.contains("scale")) w.scale = complex_from_json(j["scale"], where + ".scale");
        return w;
    }
    if (kind == "point_combination") {
        allow_fields(j, where, {"kind", "points", "coefficients"});
        PointCombination pc{reals(field(j, where, "points"), where + ".points"),
                            cvector_from_json(field(j, where, "coefficients"), where + ".coefficients")};
        if (pc.points.size() != pc.coefficients.size())
            throw SchemaError(where, "points and coefficients differ in length");
        for (std::size_t k = 0; k < pc.points.size(); ++k)
            if (pc.points[k] < domain_lower || pc.points[k] > domain_upper)
                throw SchemaError(where + ".points[" + std::to_string(k) + "]", "outside [-1, 1]");
        return pc;
    }
    throw SchemaError(where + ".kind", "unknown functional kind '" + kind + "'");
}

json functional_to_json(const FunctionalRep& phi) {
    return std::visit(overloaded{
                          [](const WeightedIntegral& w) {
                              return json{{"kind", "weighted_integral"},
                                          {"weight", function_to_json(w.weight)},
                                          {"scale", complex_to_json(w.scale)}};
                          },
                          [](const PointCombination& pc) {
                              return json{{"kind", "point_combination"},
                                          {"points", pc.points},
                                          {"coefficients", cvector_to_json(pc.coefficients)}};
                          },
                      },
                      phi);
}

// --------------------------------------------------------------- models

OperatorModel model_from_json(const json& j, const std::string& where) {
    require_object(j, where);
    if (!j.contains("kind")) {
        const ComplexMatrix a = matrix_from_json(j, where);
        return DenseModel{a, Norm::ell1()};
    }
    const std::string kind = kind_of(j, where);
    auto read_norm = [&](const char* name) {
        return j.contains(name) ? norm_from_json(j[name], where + "." + name) : Norm::ell1();
    };
    if (kind == "dense") {
        allow_fields(j, where, {"kind", "schema", "n", "entries", "norm"});
        json m{{"n", field(j, where, "n")}, {"entries", field(j, where, "entries")}};
        const ComplexMatrix a = matrix_from_json(m, where);
        const Norm norm = read_norm("norm");
        check_norm_dimension(norm, a.rows(), where + ".norm");
        return DenseModel{a, norm};
    }
    if (kind == "rank_k") {
        allow_fields(j, where, {"kind", "schema", "space", "functions", "functionals"});
        const Norm space = norm_from_json(field(j, where, "space"), where + ".space");
        const json& fj = field(j, where, "functions");
        const json& pj = field(j, where, "functionals");
        if (!fj.is_array() || !pj.is_array())
            throw SchemaError(where, "functions and functionals must be arrays");
        std::vector<FunctionRep> fs;
        std::vector<FunctionalRep> ps;
        for (std::size_t k = 0; k < fj.size(); ++k)
            fs.push_back(function_from_json(fj[k], where + ".functions[" + std::to_string(k) + "]"));
        for (std::size_t k = 0; k < pj.size(); ++k)
            ps.push_back(functional_from_json(pj[k], where + ".functionals[" + std::to_string(k) + "]"));
        return guarded(where, [&]() -> OperatorModel { return RankKModel(fs, ps, space); });
    }
    if (kind == "diagonal") {
        allow_fields(j, where, {"kind", "schema", "symbol", "norm"});
        DiagonalModel d{cvector_from_json(field(j, where, "symbol"), where + ".symbol"), read_norm("norm")};
        if (d.symbol.empty()) throw SchemaError(where + ".symbol", "empty");
        check_norm_dimension(d.norm, d.symbol.size(), where + ".norm");
        return d;
    }
    if (kind == "weighted_shift") {
        allow_fields(j, where, {"kind", "schema", "weights", "norm"});
        WeightedShiftModel s{cvector_from_json(field(j, where, "weights"), where + ".weights"),
                             read_norm("norm")};
        check_norm_dimension(s.norm, s.weights.size() + 1, where + ".norm");
        return s;
    }
    throw SchemaError(where + ".kind", "unknown model kind '" + kind + "'");
}

json model_to_json(const OperatorModel& t) {
    json out = std::visit(
        overloaded{
            [](const DenseModel& d) {
                json m = matrix_to_json(d.matrix);
                return json{{"kind", "dense"}, {"n", m["n"]}, {"entries", m["entries"]}, {"norm", norm_to_json(d.norm)}};
            },
            [](const RankKModel& r) {
                json fs = json::array(), ps = json::array();
                for (const auto& f : r.functions()) fs.push_back(function_to_json(f));
                for (const auto& p : r.functionals()) ps.push_back(functional_to_json(p));
                return json{{"kind", "rank_k"}, {"space", norm_to_json(r.space())}, {"functions", fs}, {"functionals", ps}};
            },
            [](const DiagonalModel& d) {
                return json{{"kind", "diagonal"}, {"symbol", cvector_to_json(d.symbol)}, {"norm", norm_to_json(d.norm)}};
            },
            [](const WeightedShiftModel& s) {
                return json{{"kind", "weighted_shift"}, {"weights", cvector_to_json(s.weights)}, {"norm", norm_to_json(s.norm)}};
            },
        },
        t);
    out["schema"] = std::string(model_schema_version);
    return out;
}

LatticeVector vector_from_json(const json& j, const Norm& norm, std::size_t dim,
                               const std::string& where) {
    const json* entries = &j;
    std::string path = where;
    if (j.is_object()) {
        allow_fields(j, where, {"entries"});
        entries = &field(j, where, "entries");
        path += ".entries";
    }
    CVector v = cvector_from_json(*entries, path);
    if (v.size() != dim)
        throw SchemaError(path, "expected " + std::to_string(dim) + " entries, found " +
                                    std::to_string(v.size()));
    return {std::move(v), norm};
}

}  // namespace evpos
