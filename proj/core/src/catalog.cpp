#include "evpos/catalog.hpp"

#include "evpos/errors.hpp"
#include "evpos/rng.hpp"
#include "evpos/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace evpos {

namespace {

constexpr std::uint64_t generator_stream = 0x6e6;

void require_dimension(std::size_t dim, const char* who) {
    if (dim == 0 || dim > max_generated_dimension)
        throw DomainError(std::string(who) + ": dimension must be in [1, " +
                          std::to_string(max_generated_dimension) + "]");
}

}  // namespace

// ----------------------------------------------------------- generators

EventuallyPositiveInstance make_eventually_positive(std::size_t dim, double gap,
                                                    std::uint64_t seed) {
    require_dimension(dim, "make_eventually_positive");
    if (dim < 2) throw DomainError("make_eventually_positive: dim must be >= 2");
    if (!(gap > 0.0 && gap < 1.0)) throw DomainError("make_eventually_positive: gap not in (0, 1)");
    const CounterRng root(seed, generator_stream);
    for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
        CounterRng rng = root.split(attempt);
        CVector v(dim), w(dim);
        for (auto& z : v) z = rng.uniform(0.5, 1.5);
        for (auto& z : w) z = rng.uniform(0.5, 1.5);
        Complex wv = 0.0;
        for (std::size_t i = 0; i < dim; ++i) wv += w[i] * v[i];
        ComplexMatrix p(dim, dim);
        double min_p = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) {
                p(i, j) = v[i] * w[j] / wv;
                min_p = std::min(min_p, p(i, j).real());
            }
        ComplexMatrix k(dim, dim);
        for (auto& z : k.data()) z = rng.normal();
        const ComplexMatrix comp = ComplexMatrix::identity(dim) - p;
        const ComplexMatrix m = comp * k * comp;
        const double nm = operator_norm(m, Norm::ell2());
        if (!(nm > 1e-8)) continue;
        ComplexMatrix q = m * Complex((1.0 - gap) / nm);
        EventuallyPositiveInstance out;
        out.matrix = p + q;
        out.right = std::move(v);
        out.left = std::move(w);
        out.min_projection_entry = min_p;
        out.gap = gap;
        // |(Q^n)_ij| <= (1 - gap)^n < min P_ij
        out.n0_bound =
            static_cast<unsigned>(std::floor(std::log(min_p) / std::log(1.0 - gap))) + 1;
        return out;
    }
    throw SolverFailure("make_eventually_positive: 8 degenerate draws");
}

ComplexMatrix make_positive_random(std::size_t dim, std::uint64_t seed) {
    require_dimension(dim, "make_positive_random");
    CounterRng rng(seed, generator_stream + 1);
    ComplexMatrix a(dim, dim);
    for (auto& z : a.data()) z = rng.uniform(0.1, 1.1);
    return a;
}

ComplexMatrix cycle_permutation(unsigned k) {
    if (k == 0) throw DomainError("cycle_permutation: k must be >= 1");
    ComplexMatrix c(k, k);
    for (unsigned j = 0; j < k; ++j) c((j + 1) % k, j) = 1.0;
    return c;
}

ComplexMatrix make_cyclic_block(unsigned k, std::size_t inner_dim, std::uint64_t seed) {
    require_dimension(static_cast<std::size_t>(k) * inner_dim, "make_cyclic_block");
    CounterRng rng(seed, generator_stream + 2);
    ComplexMatrix b(inner_dim, inner_dim);
    for (auto& z : b.data()) z = rng.uniform(0.5, 1.5);
    const ComplexMatrix c = cycle_permutation(k);
    const std::size_t n = k * inner_dim;
    ComplexMatrix a(n, n);
    for (unsigned r = 0; r < k; ++r)
        for (unsigned s = 0; s < k; ++s) {
            if (c(r, s) == Complex(0.0)) continue;
            for (std::size_t i = 0; i < inner_dim; ++i)
                for (std::size_t j = 0; j < inner_dim; ++j)
                    a(r * inner_dim + i, s * inner_dim + j) = b(i, j);
        }
    return a;
}

GeneratorSpec parse_generator_spec(const std::string& text) {
    GeneratorSpec g;
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    if (kind == "eventually_positive") g.kind = GeneratorSpec::Kind::EventuallyPositive;
    else if (kind == "positive_random") g.kind = GeneratorSpec::Kind::PositiveRandom;
    else if (kind == "cyclic_block") g.kind = GeneratorSpec::Kind::CyclicBlock;
    else if (kind == "paper_example") g.kind = GeneratorSpec::Kind::PaperExample;
    else throw SchemaError("generator", "unknown generator kind '" + kind + "'");
    if (colon == std::string::npos) {
        if (g.kind == GeneratorSpec::Kind::PaperExample)
            throw SchemaError("generator", "paper_example needs name=...");
        return g;
    }
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw SchemaError("generator", "expected key=value in '" + item + "'");
        const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
        try {
            if (key == "dim") g.dim = std::stoul(value);
            else if (key == "gap") g.gap = std::stod(value);
            else if (key == "k") g.k = static_cast<unsigned>(std::stoul(value));
            else if (key == "inner_dim") g.inner_dim = std::stoul(value);
            else if (key == "seed") g.seed = std::stoull(value);
            else if (key == "name") g.name = value;
            else if (key == "size") g.size = std::stoul(value);
            else throw SchemaError("generator." + key, "unknown field");
        } catch (const std::logic_error&) {
            throw SchemaError("generator." + key, "cannot parse '" + value + "'");
        }
    }
    if (g.kind == GeneratorSpec::Kind::PaperExample && g.name.empty())
        throw SchemaError("generator.name", "missing");
    return g;
}

std::string to_string(const GeneratorSpec& g) {
    std::ostringstream os;
    os.precision(17);
    switch (g.kind) {
        case GeneratorSpec::Kind::EventuallyPositive:
            os << "eventually_positive:dim=" << g.dim << ",gap=" << g.gap << ",seed=" << g.seed;
            break;
        case GeneratorSpec::Kind::PositiveRandom:
            os << "positive_random:dim=" << g.dim << ",seed=" << g.seed;
            break;
        case GeneratorSpec::Kind::CyclicBlock:
            os << "cyclic_block:k=" << g.k << ",inner_dim=" << g.inner_dim << ",seed=" << g.seed;
            break;
        case GeneratorSpec::Kind::PaperExample:
            os << "paper_example:name=" << g.name;
            if (g.size) os << ",size=" << *g.size;
            break;
    }
    return os.str();
}

// --------------------------------------------------------------- models

RankKModel individual_not_uniform_model(std::size_t nodes) {
    const Norm space = Norm::grid_sup_uniform(nodes);
    return RankKModel({Constant{1.0}, Monomial{1, 1.0}},
                      {WeightedIntegral{Constant{1.0}, 0.5},
                       PointCombination{{1.0, -1.0}, {0.25, -0.25}}},
                      space);
}

RankKModel weak_not_individual_model(double p, std::size_t cells) {
    const Norm space = Norm::lp_midpoint(p, cells);
    const double exponent = -1.0 / (2.0 * p);
    // c with c * integral of |x|^exponent over [-1, 1] = 1/2
    const double c = (1.0 + exponent) / 4.0;
    return RankKModel({Constant{1.0}, SignedPower{exponent, 1.0}},
                      {WeightedIntegral{Constant{1.0}, 0.5},
                       WeightedIntegral{SignedPower{0.0, 1.0}, c}},
                      space);
}

DiagonalModel alternating_diagonal_model(std::size_t n) {
    if (n == 0) throw DomainError("alternating_diagonal_model: n must be >= 1");
    CVector s(n);
    for (std::size_t j = 1; j <= n; ++j) s[j - 1] = -1.0 + 1.0 / static_cast<double>(j);
    return {std::move(s), Norm::ell1()};
}

WeightedShiftModel negated_shift_model(std::size_t n) {
    if (n < 2) throw DomainError("negated_shift_model: n must be >= 2");
    return {CVector(n - 1, -1.0), Norm::ell1()};
}

DenseModel rotating_diagonal_model() {
    return {ComplexMatrix::diagonal(CVector{1.0, Complex(0.0, 0.5)}), Norm::ell1()};
}

// -------------------------------------------------------------- catalog

std::vector<std::string> catalog_names() {
    return {"ex2.2a", "ex2.2b", "ex3.5a", "ex3.5b", "rem3.2b", "ex5.1", "cyclic_block",
            "eventually_positive"};
}

CatalogEntry catalog_entry(const std::string& name, std::optional<std::size_t> size) {
    using N = Notion;
    using V = VerdictStatus;
    if (name == "ex2.2a")
        return {name, "rank-two operator on sampled C[-1,1]: individually, not uniformly, eventually positive",
                individual_not_uniform_model(size.value_or(201)),
                {{{N::UniformEventual, V::Refuted},
                  {N::IndividualEventual, V::Confirmed},
                  {N::WeakEventual, V::Confirmed}},
                 {},
                 false}};
    if (name == "ex2.2b")
        return {name, "rank-two operator on quadrature L^2(-1,1): weakly, not individually, eventually positive",
                weak_not_individual_model(2.0, size.value_or(200)),
                {{{N::IndividualEventual, V::Refuted}, {N::WeakEventual, V::Confirmed}}, {}, false}};
    if (name == "ex3.5a")
        return {name, "truncated multiplication by (-1 + 1/j): not asymptotically positive",
                alternating_diagonal_model(size.value_or(default_truncation)),
                {{{N::UniformAsymptotic, V::Refuted},
                  {N::IndividualAsymptotic, V::Refuted},
                  {N::WeakAsymptotic, V::Refuted}},
                 {},
                 false}};
    if (name == "ex3.5b")
        return {name, "truncated negated right shift: nilpotent, asymptotic notions undefined",
                negated_shift_model(size.value_or(shift_truncation)),
                {{{N::UniformEventual, V::Confirmed}}, {}, true}};
    if (name == "rem3.2b")
        return {name, "diag(1, i/2): non-real, uniformly asymptotically positive",
                rotating_diagonal_model(),
                {{{N::UniformAsymptotic, V::Confirmed},
                  {N::IndividualAsymptotic, V::Confirmed},
                  {N::WeakAsymptotic, V::Confirmed}},
                 {{"spr_in_spectrum", CheckStatus::Pass}, {"positive_eigenvector", CheckStatus::Pass}},
                 false}};
    if (name == "ex5.1")
        return {name, "truncated multiplication by (-1 + 1/j): spr outside the spectrum",
                alternating_diagonal_model(size.value_or(default_truncation)),
                {{{N::UniformAsymptotic, V::Refuted},
                  {N::IndividualAsymptotic, V::Refuted},
                  {N::WeakAsymptotic, V::Refuted}},
                 {{"spr_in_spectrum", CheckStatus::Fail}},
                 false}};
    if (name == "cyclic_block") {
        const unsigned k = 3;
        return {name, "3-cycle permutation tensored with a positive 2x2 block",
                DenseModel{make_cyclic_block(k, size.value_or(2), 1), Norm::ell1()},
                {{{N::UniformEventual, V::Confirmed},
                  {N::UniformAsymptotic, V::Confirmed}},
                 {{"peripheral_cyclicity", CheckStatus::Pass},
                  {"multiplicity_monotonicity", CheckStatus::Pass}},
                 false},
                false};
    }
    if (name == "eventually_positive")
        return {name, "generated eventually positive matrix (dim 4, gap 0.5, seed 0)",
                DenseModel{make_eventually_positive(size.value_or(4), 0.5, 0).matrix, Norm::ell1()},
                {{{N::UniformEventual, V::Confirmed}, {N::UniformAsymptotic, V::Confirmed}},
                 {{"spr_in_spectrum", CheckStatus::Pass}, {"positive_eigenvector", CheckStatus::Pass}},
                 false},
                false};
    throw DomainError("unknown catalog entry '" + name + "'");
}

std::vector<CatalogEntry> literature_catalog() {
    std::vector<CatalogEntry> out;
    for (const auto& n : catalog_names()) {
        CatalogEntry e = catalog_entry(n);
        if (e.from_literature) out.push_back(std::move(e));
    }
    return out;
}

}  // namespace evpos
