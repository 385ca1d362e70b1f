// swift: price options and regenerate the published tables.
//
// Exit codes: 0 success, 1 input error, 2 numerical failure.

#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace swift;
using namespace swift::cli;

namespace {

struct Flags {
    std::string model_path;
    std::vector<double> strikes;
    GridOverrides grid;
    std::string density = "trapezoidal";
    std::string payoff = "forward";
    std::string out;
    std::string format = "csv";
    int reps = 5;
    bool call = false;
    bool reference = false;
    double from = 0.0, to = 0.0;
    int count = 0;
};

void add_grid_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--m", f.grid.m, "scale");
    cmd->add_option("--J", f.grid.J, "density FFT size exponent");
    cmd->add_option("--N", f.grid.N, "payoff transform size (power of two)");
    cmd->add_option("--L", f.grid.L, "cumulant truncation level");
    cmd->add_option("--mass-tol", f.grid.mass_tol, "density mass tolerance for the coefficient range");
}

void add_output_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--out", f.out, "output file (default stdout)");
    cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void emit(const Table& t, const Flags& f) {
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!f.out.empty()) {
        file.open(f.out);
        if (!file) throw std::invalid_argument("cannot open output file '" + f.out + "'");
        out = &file;
    }
    if (f.format == "json")
        *out << to_json(t).dump(2) << '\n';
    else
        write_csv(t, *out);
    for (const auto& w : t.warnings) std::cerr << "warning: " << w << '\n';
}

std::vector<double> strike_list(const Flags& f) {
    auto s = f.strikes;
    if (f.count > 0) {
        if (!(f.to > f.from && f.from > 0.0)) throw std::invalid_argument("--from/--to must satisfy 0 < from < to");
        for (int i = 0; i < f.count; ++i)
            s.push_back(f.count == 1 ? f.from : f.from + (f.to - f.from) * i / (f.count - 1));
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SWIFT option pricer"};
    app.require_subcommand(1);
    Flags f;

    auto* price = app.add_subcommand("price", "price puts (or calls) from a JSON model file");
    price->add_option("--model", f.model_path, "model file")->required();
    price->add_option("--strike", f.strikes, "strike (repeatable)")->required();
    price->add_option("--density", f.density, "midpoint, trapezoidal or filon")
        ->check(CLI::IsMember({"midpoint", "trapezoidal", "filon"}));
    price->add_option("--payoff", f.payoff, "classic, forward or em-fft")
        ->check(CLI::IsMember({"classic", "forward", "em-fft"}));
    price->add_flag("--call", f.call, "price calls through put-call parity");
    price->add_flag("--reference", f.reference, "also compute the reference price and error");
    add_grid_flags(price, f);
    add_output_flags(price, f);

    auto* t1 = app.add_subcommand("table1", "payoff coefficient for m=6, k=-1, a=-1 by each method");
    add_output_flags(t1, f);

    auto* pt = app.add_subcommand("price-table", "em-fft against closed-form payoff pricing times");
    pt->add_option("--reps", f.reps, "timing repetitions");
    add_output_flags(pt, f);

    auto* dt = app.add_subcommand("density-table", "midpoint against trapezoidal density coefficients");
    add_output_flags(dt, f);

    auto* it = app.add_subcommand("init-table", "trapezoidal FFT against Filon initialisation");
    it->add_option("--reps", f.reps, "timing repetitions");
    add_output_flags(it, f);

    auto* sweep = app.add_subcommand("error-sweep", "classic against forward payoff errors across strikes");
    sweep->add_option("--model", f.model_path, "model file")->required();
    sweep->add_option("--strike", f.strikes, "strike (repeatable)");
    sweep->add_option("--from", f.from, "first strike of an even grid");
    sweep->add_option("--to", f.to, "last strike of an even grid");
    sweep->add_option("--count", f.count, "number of strikes in the even grid");
    add_grid_flags(sweep, f);
    add_output_flags(sweep, f);

    auto* bench = app.add_subcommand("bench", "median stage timings");
    bench->add_option("--model", f.model_path, "model file")->required();
    bench->add_option("--reps", f.reps, "timing repetitions");
    add_grid_flags(bench, f);
    add_output_flags(bench, f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (f.reps < 1) throw std::invalid_argument("--reps must be at least 1");
        if (price->parsed()) {
            const auto model = load_model(f.model_path);
            const auto grid = make_grid(model, f.grid);
            PriceRequest req{f.strikes, f.call, f.reference, parse_density_strategy(f.density),
                             parse_payoff_strategy(f.payoff)};
            const auto results = cli::price(model, grid, req);
            if (f.format == "json") {
                nlohmann::json j = nlohmann::json::array();
                for (std::size_t i = 0; i < results.size(); ++i) {
                    auto r = swift::to_json(results[i]);
                    r["strike"] = f.strikes[i];
                    r["type"] = f.call ? "call" : "put";
                    j.push_back(r);
                }
                std::ofstream file;
                std::ostream* out = &std::cout;
                if (!f.out.empty()) {
                    file.open(f.out);
                    if (!file) throw std::invalid_argument("cannot open output file '" + f.out + "'");
                    out = &file;
                }
                *out << j.dump(2) << '\n';
            } else {
                emit(price_rows(results, f.strikes), f);
            }
        } else if (t1->parsed()) {
            emit(table1(), f);
        } else if (pt->parsed()) {
            emit(price_table(f.reps), f);
        } else if (dt->parsed()) {
            emit(density_table(), f);
        } else if (it->parsed()) {
            emit(init_table(f.reps), f);
        } else if (sweep->parsed()) {
            const auto model = load_model(f.model_path);
            const auto strikes = strike_list(f);
            const auto grid = cumulant_grid(model, f.grid.m.value_or(8), f.grid.L.value_or(12.0), f.grid.J);
            emit(error_sweep(model, strikes, grid), f);
        } else if (bench->parsed()) {
            const auto model = load_model(f.model_path);
            emit(cli::bench(model, make_grid(model, f.grid), f.reps), f);
        }
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
