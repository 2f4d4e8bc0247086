#include "weylchsh/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "weylchsh/errors.hpp"
#include "weylchsh/weyl_correlator.hpp"

namespace weylchsh {

namespace {

constexpr double kGuardrail = 1e-9;
constexpr int kLatticePerAxis = 6;
constexpr int kLatticeRefinements = 6;
constexpr int kRandomStartsQft = 8;
constexpr int kRandomStartsSpin = 24;
constexpr long kEvalsPerStartQft = 600;
constexpr long kEvalsPerStartSpin = 3000;

struct BudgetExhausted {};

using Point = std::vector<double>;

// Counts evaluations, enforces the budget and the Tsirelson guardrail, keeps the incumbent.
class Objective {
public:
    Objective(std::function<double(const Point&)> f, long budget) : f_(std::move(f)), budget_(budget) {}

    double operator()(const Point& x) {
        if (evaluations_ >= budget_) {
            throw BudgetExhausted{};
        }
        ++evaluations_;
        const double v = f_(x);
        if (!std::isfinite(v) || std::abs(v) > kTsirelsonBound + kGuardrail) {
            throw NumericalError("objective value " + std::to_string(v) + " exceeds 2 sqrt 2; correlator is broken");
        }
        if (!has_best_ || v > best_) {
            best_ = v;
            best_x_ = x;
            has_best_ = true;
        }
        return v;
    }

    long evaluations() const { return evaluations_; }
    bool has_best() const { return has_best_; }
    double best() const { return best_; }
    const Point& best_x() const { return best_x_; }

private:
    std::function<double(const Point&)> f_;
    long budget_;
    long evaluations_{0};
    bool has_best_{false};
    double best_{0.0};
    Point best_x_;
};

// Box-clamped Nelder-Mead maximizing f from x0 with initial steps `step`.
void nelder_mead(Objective& f, Point x0, const Point& step, const Point& lo, const Point& hi, long max_evals) {
    const std::size_t n = x0.size();
    if (n == 0) {
        return;
    }
    auto clamp = [&](Point x) {
        for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
        return x;
    };
    const long start = f.evaluations();
    auto eval = [&](const Point& x) { return -f(x); };

    std::vector<Point> simplex{clamp(x0)};
    for (std::size_t i = 0; i < n; ++i) {
        Point v = x0;
        v[i] += step[i];
        if (v[i] > hi[i]) v[i] = x0[i] - step[i];
        simplex.push_back(clamp(v));
    }
    std::vector<double> fv;
    for (const auto& v : simplex) fv.push_back(eval(v));

    while (f.evaluations() - start < max_evals) {
        std::vector<std::size_t> order(n + 1);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<Point> s2;
        std::vector<double> f2;
        for (auto k : order) {
            s2.push_back(simplex[k]);
            f2.push_back(fv[k]);
        }
        simplex.swap(s2);
        fv.swap(f2);

        double size = 0.0;
        for (std::size_t k = 1; k <= n; ++k)
            for (std::size_t i = 0; i < n; ++i) size = std::max(size, std::abs(simplex[k][i] - simplex[0][i]));
        if (std::abs(fv[n] - fv[0]) < 1e-14 && size < 1e-10) {
            break;
        }

        Point centroid(n, 0.0);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k][i] / static_cast<double>(n);
        auto along = [&](double t) {
            Point x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = centroid[i] + t * (simplex[n][i] - centroid[i]);
            return clamp(x);
        };

        const Point xr = along(-1.0);
        const double fr = eval(xr);
        if (fr < fv[0]) {
            const Point xe = along(-2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            simplex[n] = xr;
            fv[n] = fr;
        } else {
            const bool outside = fr < fv[n];
            const Point xc = along(outside ? -0.5 : 0.5);
            const double fc = eval(xc);
            if (fc < (outside ? fr : fv[n])) {
                simplex[n] = xc;
                fv[n] = fc;
            } else {
                for (std::size_t k = 1; k <= n; ++k) {
                    for (std::size_t i = 0; i < n; ++i) simplex[k][i] = simplex[0][i] + 0.5 * (simplex[k][i] - simplex[0][i]);
                    simplex[k] = clamp(simplex[k]);
                    fv[k] = eval(simplex[k]);
                }
            }
        }
    }
}

} // namespace

QftBounds validate(const QftBounds& b) {
    const std::array<double, 3> lim_lo{0.0, 0.0, 0.001};
    const std::array<double, 3> lim_hi{5.0, 5.0, 0.9999};
    const char* names[3] = {"eta", "eta_prime", "lambda"};
    for (int i = 0; i < 3; ++i) {
        if (!(b.lo[i] <= b.hi[i])) {
            throw InvalidArgument(std::string("bounds for ") + names[i] + " are empty or not finite");
        }
        if (b.lo[i] < lim_lo[i] || b.hi[i] > lim_hi[i]) {
            throw InvalidArgument(std::string("bounds for ") + names[i] + " leave [" + std::to_string(lim_lo[i]) +
                                  ", " + std::to_string(lim_hi[i]) + "]");
        }
    }
    return b;
}

bool contains(const QftBounds& b, const ModularParams& p) {
    const std::array<double, 3> x{p.eta, p.eta_prime, p.lambda};
    for (int i = 0; i < 3; ++i) {
        if (x[i] < b.lo[i] || x[i] > b.hi[i]) return false;
    }
    return true;
}

OptimizationResult maximize_chsh_qft(const QftBounds& bounds, std::uint64_t seed, long budget) {
    validate(bounds);
    if (budget <= 0) {
        throw InvalidArgument("empty budget");
    }
    std::vector<int> free_dims;
    for (int i = 0; i < 3; ++i) {
        if (bounds.lo[i] < bounds.hi[i]) free_dims.push_back(i);
    }
    const std::size_t nf = free_dims.size();
    auto full = [&](const Point& x) {
        std::array<double, 3> y = bounds.lo;
        for (std::size_t k = 0; k < nf; ++k) y[free_dims[k]] = x[k];
        return ModularParams{y[0], y[1], y[2]};
    };
    Objective obj([&](const Point& x) { return chsh_closed_form(full(x)); }, budget);
    Point lo(nf), hi(nf), step(nf);
    for (std::size_t k = 0; k < nf; ++k) {
        lo[k] = bounds.lo[free_dims[k]];
        hi[k] = bounds.hi[free_dims[k]];
        step[k] = 0.1 * (hi[k] - lo[k]);
    }

    int starts = 0;
    try {
        if (nf == 0) {
            obj(Point{});
        } else {
            // Lattice, independent of the budget.
            std::vector<std::pair<double, Point>> lattice;
            long total = 1;
            for (std::size_t k = 0; k < nf; ++k) total *= kLatticePerAxis;
            for (long idx = 0; idx < total; ++idx) {
                Point x(nf);
                long rest = idx;
                for (std::size_t k = 0; k < nf; ++k) {
                    const int j = static_cast<int>(rest % kLatticePerAxis);
                    rest /= kLatticePerAxis;
                    x[k] = lo[k] + (hi[k] - lo[k]) * j / (kLatticePerAxis - 1);
                }
                lattice.emplace_back(obj(x), x);
            }
            std::stable_sort(lattice.begin(), lattice.end(),
                             [](const auto& a, const auto& b) { return a.first > b.first; });

            std::vector<Point> seeds;
            if (contains(bounds, kReferenceParams)) {
                const std::array<double, 3> ref{kReferenceParams.eta, kReferenceParams.eta_prime,
                                                kReferenceParams.lambda};
                Point x(nf);
                for (std::size_t k = 0; k < nf; ++k) x[k] = ref[free_dims[k]];
                seeds.push_back(x);
            }
            for (int k = 0; k < kLatticeRefinements && k < static_cast<int>(lattice.size()); ++k) {
                seeds.push_back(lattice[static_cast<std::size_t>(k)].second);
            }
            std::mt19937_64 rng(seed);
            for (int r = 0; r < kRandomStartsQft; ++r) {
                Point x(nf);
                for (std::size_t k = 0; k < nf; ++k) x[k] = std::uniform_real_distribution<double>(lo[k], hi[k])(rng);
                seeds.push_back(x);
            }
            for (const auto& x : seeds) {
                ++starts;
                nelder_mead(obj, x, step, lo, hi, kEvalsPerStartQft);
            }
        }
    } catch (const BudgetExhausted&) {
    }
    OptimizationResult out;
    out.best_params = full(obj.best_x());
    out.best_value = obj.best();
    out.starts = starts;
    out.evaluations = obj.evaluations();
    out.seed = seed;
    return out;
}

OptimizationResult maximize_chsh_spin(std::uint64_t seed, long budget, SpinState state,
                                      std::optional<AngleSet> start) {
    auto to_angles = [](const Point& x) {
        return AngleSet{x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7]};
    };
    auto to_point = [](const AngleSet& a) {
        return Point{a.alpha1, a.alpha2, a.alpha1p, a.alpha2p, a.beta1, a.beta2, a.beta1p, a.beta2p};
    };
    if (start && !start->is_finite()) {
        throw InvalidArgument("start angles must be finite");
    }
    if (budget < 0 || (budget == 0 && !start)) {
        throw InvalidArgument("empty budget");
    }
    // Evaluation-only mode still performs the one evaluation it reports.
    const long effective = budget == 0 ? 1 : budget;
    Objective obj([&](const Point& x) { return chsh_spin(to_angles(x), state); }, effective);
    const double wide = 4.0 * std::numbers::pi;
    const Point lo(8, -wide), hi(8, wide), step(8, 0.3);

    int starts = 0;
    try {
        if (budget == 0) {
            ++starts;
            obj(to_point(*start));
        } else {
            std::vector<Point> seeds;
            if (start) seeds.push_back(to_point(*start));
            seeds.push_back(to_point(reference_angles()));
            std::mt19937_64 rng(seed);
            for (int r = 0; r < kRandomStartsSpin; ++r) seeds.push_back(to_point(random_angles(rng)));
            for (const auto& x : seeds) {
                ++starts;
                nelder_mead(obj, x, step, lo, hi, kEvalsPerStartSpin);
            }
        }
    } catch (const BudgetExhausted&) {
    }
    OptimizationResult out;
    out.best_params = to_angles(obj.best_x());
    out.best_value = obj.best();
    out.starts = starts;
    out.evaluations = obj.evaluations();
    out.seed = seed;
    return out;
}

} // namespace weylchsh
