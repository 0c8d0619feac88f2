#include "evpos/rates.hpp"

#include "evpos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace evpos {

namespace {

void require_nonnegative(const std::vector<double>& v, const char* what) {
    for (std::size_t k = 0; k < v.size(); ++k)
        if (!std::isfinite(v[k]) || v[k] < 0.0)
            throw DomainError(std::string(what) + ": entry " + std::to_string(k) +
                              " is negative or not finite");
}

/// Slope of the least-squares line through (x_k, y_k).
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

DecaySequence::DecaySequence(std::vector<double> values, std::string source)
    : values_(std::move(values)), source_(std::move(source)) {
    require_nonnegative(values_, "DecaySequence");
}

MajorantSequence::MajorantSequence(std::vector<double> values) : values_(std::move(values)) {
    require_nonnegative(values_, "MajorantSequence");
}

double MajorantSequence::max() const {
    return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

bool MajorantSequence::decays_to_zero() const {
    if (values_.empty()) return true;
    const std::size_t start = values_.size() - std::max<std::size_t>(values_.size() / 4, 1);
    const double tail = *std::max_element(values_.begin() + static_cast<std::ptrdiff_t>(start),
                                          values_.end());
    return tail <= 1e-6 * max();
}

// ---------------------------------------------------------------- rates

void validate(const RateFunction& phi) {
    if (const auto* p = std::get_if<PowerRate>(&phi)) {
        if (!(p->q > 0.0) || !std::isfinite(p->q)) throw DomainError("PowerRate: q must be > 0");
    } else if (const auto* t = std::get_if<ThresholdRate>(&phi)) {
        if (!(t->c > 0.0) || !std::isfinite(t->c))
            throw DomainError("ThresholdRate: c must be > 0");
    } else {
        const auto& b = std::get<TableRate>(phi).breakpoints;
        if (b.empty()) throw DomainError("TableRate: no breakpoints");
        if (b.front().first != 0.0 || b.front().second < 0.0)
            throw DomainError("TableRate: must start at (0, phi(0) >= 0)");
        for (std::size_t k = 1; k < b.size(); ++k)
            if (!(b[k].first > b[k - 1].first) || b[k].second < b[k - 1].second)
                throw DomainError("TableRate: breakpoints must be increasing");
    }
}

double evaluate(const RateFunction& phi, double t) {
    if (t < 0.0) throw DomainError("rate function evaluated at a negative argument");
    if (const auto* p = std::get_if<PowerRate>(&phi)) return std::pow(t, p->q);
    if (const auto* th = std::get_if<ThresholdRate>(&phi)) return std::max(t - th->c, 0.0);
    const auto& b = std::get<TableRate>(phi).breakpoints;
    if (t >= b.back().first) return b.back().second;
    const auto it = std::upper_bound(b.begin(), b.end(), t,
                                     [](double v, const auto& bp) { return v < bp.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    return lo.second + (hi.second - lo.second) * (t - lo.first) / (hi.first - lo.first);
}

std::string name(const RateFunction& phi) {
    if (const auto* p = std::get_if<PowerRate>(&phi)) return "power(" + std::to_string(p->q) + ")";
    if (const auto* t = std::get_if<ThresholdRate>(&phi))
        return "threshold(" + std::to_string(t->c) + ")";
    return "table(" + std::to_string(std::get<TableRate>(phi).breakpoints.size()) + ")";
}

bool strictly_positive(const RateFunction& phi) {
    if (std::holds_alternative<PowerRate>(phi)) return true;
    if (std::holds_alternative<ThresholdRate>(phi)) return false;
    const auto& b = std::get<TableRate>(phi).breakpoints;
    return b.size() >= 2 && b[1].second > 0.0;
}

// ------------------------------------------------------- rearrangements

std::vector<double> decreasing_rearrangement(std::vector<double> a) {
    require_nonnegative(a, "decreasing_rearrangement");
    std::sort(a.begin(), a.end(), std::greater<>());
    return a;
}

GovernsResult governs(const MajorantSequence& f, const DecaySequence& a) {
    if (f.size() != a.size())
        throw DimensionMismatch("governs: majorant has " + std::to_string(f.size()) +
                                " entries, sequence has " + std::to_string(a.size()));
    const auto star = decreasing_rearrangement(a.values());
    GovernsResult r;
    r.governed = true;
    for (std::size_t n = 0; n < star.size(); ++n) {
        const double fn = f.values()[n];
        if (fn > 0.0) {
            r.c = std::max(r.c, star[n] / fn);
        } else if (star[n] > 0.0) {
            return {false, 0.0, n};
        }
    }
    return r;
}

// ---------------------------------------------------------- summability

std::string to_string(Trend t) {
    switch (t) {
        case Trend::Summable: return "summable_trend";
        case Trend::Divergent: return "divergent_trend";
        case Trend::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

SummabilityReport summability_report(const DecaySequence& a,
                                     const std::vector<RateFunction>& phis) {
    SummabilityReport report;
    const auto& v = a.values();
    const std::size_t len = v.size();
    for (const auto& phi : phis) {
        validate(phi);
        SummabilityEntry e;
        e.rate = name(phi);
        e.diagnostic_only = !strictly_positive(phi);
        std::vector<double> inc(len);
        double s = 0.0;
        for (std::size_t n = 0; n < len; ++n) {
            inc[n] = evaluate(phi, v[n]);
            s += inc[n];
            e.partial_sums.push_back(s);
        }
        std::vector<double> xs, ls, ys;
        for (std::size_t n = len / 2; n < len; ++n)
            if (inc[n] > 0.0) {
                xs.push_back(static_cast<double>(n));
                ls.push_back(std::log(static_cast<double>(n + 1)));
                ys.push_back(std::log(inc[n]));
            }
        if (len < 4) {
            e.trend = Trend::Inconclusive;
        } else if (xs.size() < 2) {
            // increments vanish in the tail
            e.trend = Trend::Summable;
            e.limit_estimate = s;
        } else {
            e.log_slope = ls_slope(xs, ys);
            e.power_exponent = -ls_slope(ls, ys);
            const double last = inc[len - 1];
            if (e.power_exponent >= summable_exponent) {
                e.trend = Trend::Summable;
                const double ratio = std::exp(e.log_slope);
                const double geometric = ratio < 1.0 ? last * ratio / (1.0 - ratio)
                                                     : std::numeric_limits<double>::infinity();
                const double power =
                    last * static_cast<double>(len) / (e.power_exponent - 1.0);
                e.limit_estimate = s + std::min(geometric, power);
            } else if (e.power_exponent <= divergent_exponent) {
                e.trend = Trend::Divergent;
            }
        }
        report.entries.push_back(std::move(e));
    }

    const auto star = decreasing_rearrangement(v);
    std::vector<double> ls, ys;
    for (std::size_t n = std::max<std::size_t>(len / 2, 1); n < len; ++n)
        if (star[n] > 0.0) {
            ls.push_back(std::log(static_cast<double>(n + 1)));
            ys.push_back(std::log(star[n]));
        }
    if (ls.size() >= 2) {
        const double beta = -ls_slope(ls, ys);
        if (beta > 0.0) report.lp_exponent = 1.0 / beta;
    } else if (len >= 4) {
        report.lp_exponent = 0.0;  // finitely supported
    }
    return report;
}

// ---------------------------------------------------------------- alpha

AlphaValue alpha(const MajorantSequence& f, double r) {
    if (!(r > 1.0) || !std::isfinite(r)) throw DomainError("alpha: r must be > 1");
    AlphaValue out;
    double w = 1.0 / r;
    for (double fn : f.values()) {
        out.value += fn * w;
        w /= r;
    }
    if (f.size() > 0) {
        const double last = f.values().back();
        out.tail_bound = last * std::pow(r, -static_cast<double>(f.size())) / (r - 1.0);
    }
    return out;
}

MajorantSequence countable_family_reduce(const std::vector<MajorantSequence>& fs) {
    if (fs.empty()) throw DomainError("countable_family_reduce: empty family");
    const std::size_t len = fs.front().size();
    std::vector<double> out(len, 0.0);
    double weight = 0.5;
    for (std::size_t j = 0; j < fs.size(); ++j, weight *= 0.5) {
        if (fs[j].size() != len)
            throw DimensionMismatch("countable_family_reduce: sequences differ in length");
        const double m = fs[j].max();
        if (!(m > 0.0))
            throw DomainError("countable_family_reduce: sequence " + std::to_string(j) +
                              " is zero");
        for (std::size_t n = 0; n < len; ++n) out[n] += weight * fs[j].values()[n] / m;
    }
    return MajorantSequence(std::move(out));
}

}  // namespace evpos
