#pragma once

// Table producers behind the swift command-line tool. Each returns a Table;
// the driver only parses flags and writes the result.

#include <swift/swift.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace swift::cli {

// value: 17 significant digits; error: scientific; text and counts verbatim
struct Value {
    double x;
};
struct Error {
    double x;
};
using Cell = std::variant<std::string, long long, Value, Error>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> warnings;

    void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

inline std::string format_cell(const Cell& c) {
    char buf[64];
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* n = std::get_if<long long>(&c)) return std::to_string(*n);
    if (const auto* v = std::get_if<Value>(&c)) {
        std::snprintf(buf, sizeof buf, "%.17g", v->x);
        return buf;
    }
    std::snprintf(buf, sizeof buf, "%.16e", std::get<Error>(c).x);
    return buf;
}

inline void write_csv(const Table& t, std::ostream& out) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
        out << '\n';
    }
}

inline nlohmann::json to_json(const Table& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r;
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, Value> || std::is_same_v<V, Error>)
                        r[t.columns[i]] = v.x;
                    else
                        r[t.columns[i]] = v;
                },
                row[i]);
        }
        rows.push_back(r);
    }
    nlohmann::json j{{"rows", rows}};
    if (!t.warnings.empty()) j["warnings"] = t.warnings;
    return j;
}

// --- grid handling -----------------------------------------------------------

struct GridOverrides {
    std::optional<int> m;
    std::optional<int> J;
    std::optional<std::size_t> N;
    std::optional<double> L;
    std::optional<double> mass_tol;
};

/// Automatic grid with user overrides applied on top. A J too small for the
/// selected coefficient range is an input error.
inline WaveletGrid make_grid(const ModelSpec& model, const GridOverrides& o) {
    AutoGridOptions opt;
    if (o.L) opt.L = *o.L;
    if (o.mass_tol) opt.mass_tol = *o.mass_tol;
    if (o.m) {
        require(*o.m >= 1 && *o.m <= 30, "--m must lie in [1, 30]");
        opt.m = *o.m;
    }
    auto g = auto_grid(model, opt);
    if (o.J) {
        require(*o.J >= 1 && *o.J <= 30, "--J must lie in [1, 30]");
        require(static_cast<long long>(g.k2) - g.k1 <= (1LL << *o.J),
                "--J is too small for the selected coefficient range");
        g.J = *o.J;
    }
    if (o.N) {
        require(*o.N >= 1 && is_power_of_two(*o.N), "--N must be a power of two");
        g.N = *o.N;
    }
    g.validate();
    return g;
}

/// Window of exactly 2^J coefficients centred on zero with [a, b] equal to
/// the window, as used for the published tables.
inline WaveletGrid centred_grid(int m, int J) {
    WaveletGrid g;
    g.m = m;
    g.J = J;
    g.k1 = -(1 << (J - 1));
    g.k2 = 1 << (J - 1);
    g.a = std::ldexp(static_cast<double>(g.k1), -m);
    g.b = std::ldexp(static_cast<double>(g.k2), -m);
    return g;
}

/// Coefficient window covering the cumulant interval at level L, with J the
/// smallest exponent whose FFT covers it.
inline WaveletGrid cumulant_grid(const ModelSpec& model, int m, double L, std::optional<int> J = {}) {
    WaveletGrid g;
    const auto iv = truncation_interval(cumulants(model), L);
    g.m = m;
    g.a = iv.a;
    g.b = iv.b;
    g.L = L;
    g.k1 = static_cast<int>(std::floor(std::ldexp(g.a, m)));
    g.k2 = static_cast<int>(std::ceil(std::ldexp(g.b, m))) + 1;
    g.J = 1;
    while ((1LL << g.J) < static_cast<long long>(g.k2) - g.k1) ++g.J;
    if (J) {
        require((1LL << *J) >= static_cast<long long>(g.k2) - g.k1, "--J is too small for the coefficient range");
        g.J = *J;
    }
    g.validate();
    return g;
}

// --- published parameter sets ------------------------------------------------

inline ModelSpec heston_short() {
    return ModelSpec::heston(1.0, 2.0 / 365.0, 1.0, HestonParams{0.1, 1.0, 0.1, 1.0, -0.9});
}

inline ModelSpec heston_long() {
    return ModelSpec::heston(1e6, 1.0, 1.0, HestonParams{0.0225, 0.1, 0.01, 2.0, 0.5});
}

// --- timing ------------------------------------------------------------------

struct Timing {
    double median_ns = 0.0;
    double min_ns = 0.0;
    double max_ns = 0.0;
    int samples = 0;
};

template <class F>
Timing time_it(int reps, F&& f) {
    std::vector<double> t;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        t.push_back(std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - t0).count());
    }
    std::sort(t.begin(), t.end());
    const std::size_t n = t.size();
    const double median = n % 2 ? t[n / 2] : 0.5 * (t[n / 2 - 1] + t[n / 2]);
    return {median, t.front(), t.back(), static_cast<int>(n)};
}

// --- commands ----------------------------------------------------------------

/// V_{m,k} for m = 6, k = -1, a = -1 by the truncated cosine product, the
/// composite Simpson rule on the same node count, and the closed form.
inline Table table1() {
    Table t{{"method", "J", "value"}, {}, {}};
    const int m = 6, k = -1;
    const double a = -1.0;
    for (int J : {5, 10}) {
        t.add({std::string("vieta"), static_cast<long long>(J), Value{payoff_classic_vieta(1.0, m, k, a, J)}});
        t.add({std::string("simpson"), static_cast<long long>(J), Value{payoff_classic_simpson(1.0, m, k, a, J)}});
    }
    t.add({std::string("closed-form"), 0LL, Value{payoff_classic_si_ein(1.0, m, k, a)}});
    return t;
}

struct PriceRequest {
    std::vector<double> strikes;
    bool call = false;
    bool reference = false;
    DensityStrategy density = DensityStrategy::Trapezoidal;
    PayoffStrategy payoff = PayoffStrategy::Forward;
};

inline std::vector<PricingResult> price(const ModelSpec& model, const WaveletGrid& grid, const PriceRequest& req) {
    const PricingContext ctx(model, grid, req.density);
    std::vector<PricingResult> out;
    for (double K : req.strikes) {
        auto r = req.call ? ctx.price_call(K, req.payoff) : ctx.price_put(K, req.payoff);
        r.cf_evals += ctx.init_cf_evals();
        r.elapsed += ctx.init_time();
        if (req.reference) r.set_reference(req.call ? reference_call(model, K) : reference_put(model, K));
        out.push_back(std::move(r));
    }
    return out;
}

inline Table price_rows(const std::vector<PricingResult>& results, const std::vector<double>& strikes) {
    Table t{{"strike", "price", "reference", "error", "m", "k1", "k2", "J", "N", "a", "b", "density", "payoff",
             "cf_evals", "elapsed_ns"},
            {},
            {}};
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        const auto& g = r.grid;
        t.add({Value{strikes[i]}, Value{r.price}, r.reference_price ? Cell{Value{*r.reference_price}} : Cell{std::string()},
               r.abs_error ? Cell{Error{*r.abs_error}} : Cell{std::string()}, static_cast<long long>(g.m),
               static_cast<long long>(g.k1), static_cast<long long>(g.k2), static_cast<long long>(g.J),
               static_cast<long long>(g.payoff_size()), Value{g.a}, Value{g.b}, r.density_strategy, r.payoff_strategy,
               static_cast<long long>(r.cf_evals), static_cast<long long>(r.elapsed.count())});
    }
    return t;
}

/// Pricing time with the em-fft payoff against the per-k closed form for
/// both published sets, on centred windows of k2 - k1 = 2^J coefficients:
/// J = 12 on the one-year set and J = 8 on the two-day set, both at m = 8.
inline Table price_table(int reps) {
    Table t{{"set", "method", "strike", "price", "reference", "error", "median_ns"}, {}, {}};
    struct Row {
        std::string name;
        ModelSpec model;
        WaveletGrid grid;
        double K;
        bool call;
    };
    const std::vector<Row> rows = {
        {"heston-1y", heston_long(), centred_grid(8, 12), 250000.0, false},
        {"heston-2d", heston_short(), centred_grid(8, 8), 1.0064, true},
    };
    for (const auto& row : rows) {
        const PricingContext ctx(row.model, row.grid, DensityStrategy::Trapezoidal);
        const double ref = row.call ? reference_call(row.model, row.K) : reference_put(row.model, row.K);
        for (auto [label, ps] : {std::pair{"fft", PayoffStrategy::EmFft}, std::pair{"closed-form", PayoffStrategy::Forward}}) {
            double price = 0.0;
            const auto tm = time_it(reps, [&] {
                price = row.call ? ctx.price_call(row.K, ps).price : ctx.price_put(row.K, ps).price;
            });
            t.add({row.name, std::string(label), Value{row.K}, Value{price}, Value{ref}, Error{price - ref},
                   Value{tm.median_ns}});
        }
    }
    return t;
}

/// Out-of-the-money prices with the midpoint and trapezoidal density rules
/// at the published (m, J): m = 8, J = 12 on the one-year set (put at
/// 250000, call at 4000000) and m = 6, J = 5 on the two-day set (calls at
/// 1.0064 and 1.064), each on the centred window of 2^J coefficients.
inline Table density_table() {
    Table t{{"set", "method", "m", "J", "strike", "type", "price", "reference", "error"}, {}, {}};
    struct Row {
        std::string name;
        ModelSpec model;
        int m, J;
        std::vector<std::pair<double, bool>> strikes;
    };
    const std::vector<Row> rows = {
        {"heston-1y", heston_long(), 8, 12, {{250000.0, false}, {4000000.0, true}}},
        {"heston-2d", heston_short(), 6, 5, {{1.0064, true}, {1.064, true}}},
    };
    for (const auto& row : rows) {
        const auto grid = centred_grid(row.m, row.J);
        const PricingContext mid(row.model, grid, DensityStrategy::Midpoint);
        const PricingContext trap(row.model, grid, DensityStrategy::Trapezoidal);
        for (auto [K, call] : row.strikes) {
            const double ref = call ? reference_call(row.model, K) : reference_put(row.model, K);
            for (const auto* ctx : {&mid, &trap}) {
                const double p = call ? ctx->price_call(K, PayoffStrategy::Forward).price
                                      : ctx->price_put(K, PayoffStrategy::Forward).price;
                t.add({row.name, std::string(to_string(ctx->density_strategy())), static_cast<long long>(row.m),
                       static_cast<long long>(row.J), Value{K}, std::string(call ? "call" : "put"), Value{p},
                       Value{ref}, Error{p - ref}});
            }
        }
    }
    return t;
}

/// Density initialisation: trapezoidal FFT against adaptive Filon at
/// tolerance 1e-8, both published sets, reporting characteristic-function
/// evaluations and the largest coefficient difference.
inline Table init_table(int reps) {
    Table t{{"set", "method", "m", "k1", "k2", "cf_evals", "median_ns", "max_coeff_diff"}, {}, {}};
    struct Row {
        std::string name;
        ModelSpec model;
        int m, J;
    };
    const std::vector<Row> rows = {{"heston-1y", heston_long(), 8, 12}, {"heston-2d", heston_short(), 6, 5}};
    for (const auto& row : rows) {
        const auto grid = centred_grid(row.m, row.J);
        CoefficientArray fft;
        std::size_t fft_evals = 0;
        const auto tf = time_it(reps, [&] {
            const CountingCharFn counted(row.model);
            fft = density_trapezoidal_fft(counted, grid.density_job());
            fft_evals = counted.count();
        });
        FilonResult filon;
        const auto tl = time_it(reps, [&] { filon = density_filon(row.model, grid.m, grid.k1, grid.k2); });
        double diff = 0.0;
        for (int k = grid.k1; k < grid.k2; ++k) diff = std::max(diff, std::fabs(fft.at(k) - filon.coefficients.at(k)));
        t.add({row.name, std::string("fft"), static_cast<long long>(row.m), static_cast<long long>(grid.k1),
               static_cast<long long>(grid.k2), static_cast<long long>(fft_evals), Value{tf.median_ns}, Error{0.0}});
        t.add({row.name, std::string("filon"), static_cast<long long>(row.m), static_cast<long long>(grid.k1),
               static_cast<long long>(grid.k2), static_cast<long long>(filon.cf_evals), Value{tl.median_ns},
               Error{diff}});
    }
    return t;
}

/// Classic against forward-centred payoff coefficients across strikes, with
/// the density from a fixed scale and cumulant window. Strikes at or beyond
/// F e^b are kept and flagged.
inline Table error_sweep(const ModelSpec& model, const std::vector<double>& strikes, const WaveletGrid& grid) {
    Table t{{"strike", "price_classic", "price_forward", "reference", "err_classic", "err_forward", "flag"}, {}, {}};
    if (strikes.empty()) return t;
    const PricingContext ctx(model, grid, DensityStrategy::Trapezoidal);
    for (double K : strikes) {
        require(K > 0.0, "strikes must be positive");
        const double z = std::log(K / model.forward());
        const double pc = ctx.price_put(K, PayoffStrategy::Classic).price;
        const double pf = ctx.price_put(K, PayoffStrategy::Forward).price;
        const double ref = reference_put(model, K);
        t.add({Value{K}, Value{pc}, Value{pf}, Value{ref}, Error{pc - ref}, Error{pf - ref},
               std::string(z >= grid.b ? "beyond-b" : "")});
    }
    return t;
}

/// Median wall times for the main stages on one model and grid.
inline Table bench(const ModelSpec& model, const WaveletGrid& grid, int reps) {
    require(reps >= 1, "--reps must be at least 1");
    Table t{{"stage", "median_ns", "min_ns", "max_ns", "samples", "cf_evals", "coefficients", "warning"}, {}, {}};
    const std::string warn = reps == 1 ? "single-sample" : "";
    if (reps == 1) t.warnings.push_back("reps = 1: timings are single samples with unknown variance");
    const double K = model.forward();
    const long long count = grid.k2 - grid.k1;
    auto add = [&](const std::string& stage, const Timing& tm, long long evals) {
        t.add({stage, Value{tm.median_ns}, Value{tm.min_ns}, Value{tm.max_ns}, static_cast<long long>(tm.samples), evals,
               count, warn});
    };

    const TrigTransform transform(grid.payoff_size());
    const PayoffJob job{K, model.forward(), grid.m, grid.a, grid.b, grid.k1, grid.k2, grid.payoff_size()};
    double sink = 0.0;
    add("payoff-em-fft", time_it(reps, [&] { sink += payoff_fft_euler_maclaurin(job, true, &transform).values[0]; }), 0);
    add("payoff-closed-form", time_it(reps, [&] {
            for (int k = grid.k1; k < grid.k2; ++k)
                sink += payoff_forward_si_ein(K, model.forward(), grid.m, k, grid.a, grid.b);
        }),
        0);

    std::size_t fft_evals = 0;
    const auto tt = time_it(reps, [&] {
        const CountingCharFn counted(model);
        sink += density_trapezoidal_fft(counted, grid.density_job()).values[0];
        fft_evals = counted.count();
    });
    add("density-trapezoidal-fft", tt, static_cast<long long>(fft_evals));
    std::size_t filon_evals = 0;
    const auto tf = time_it(reps, [&] {
        const auto r = density_filon(model, grid.m, grid.k1, grid.k2);
        sink += r.coefficients.values[0];
        filon_evals = r.cf_evals;
    });
    add("density-filon", tf, static_cast<long long>(filon_evals));

    const PricingContext ctx(model, grid, DensityStrategy::Trapezoidal);
    add("price-warm", time_it(reps, [&] { sink += ctx.price_put(K, PayoffStrategy::Forward).price; }), 0);
    if (!std::isfinite(sink)) t.warnings.push_back("non-finite intermediate result");
    return t;
}

}  // namespace swift::cli
