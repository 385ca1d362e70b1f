#pragma once

// JSON model files and result serialization.
//
//   {"forward": 1.0, "maturity": 0.00548, "discount": 1.0,
//    "heston": {"v0": 0.1, "kappa": 1.0, "theta": 0.1, "sigma": 1.0, "rho": -0.9}}
//   {"forward": 100, "maturity": 1, "lognormal": {"vol": 0.2}}
//
// "discount" defaults to 1.

#include <swift/pricer.hpp>

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace swift {

/// Malformed or inconsistent model input. The message names the key or the
/// line at fault.
class ModelFileError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline double number_at(const nlohmann::json& obj, const std::string& key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ModelFileError("missing key '" + where + key + "'");
    if (!it->is_number()) throw ModelFileError("key '" + where + key + "' must be a number");
    return it->get<double>();
}

inline void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> known, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ModelFileError("unknown key '" + where + key + "'");
    }
}

inline std::size_t line_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

}  // namespace detail

inline ModelSpec model_from_json(const nlohmann::json& j) {
    using detail::number_at;
    if (!j.is_object()) throw ModelFileError("model file must hold a JSON object");
    detail::reject_unknown(j, {"forward", "maturity", "discount", "heston", "lognormal", "name"}, "");
    const double F = number_at(j, "forward", "");
    const double T = number_at(j, "maturity", "");
    const double B = j.contains("discount") ? number_at(j, "discount", "") : 1.0;
    const bool has_heston = j.contains("heston"), has_ln = j.contains("lognormal");
    if (has_heston == has_ln) throw ModelFileError("exactly one of 'heston' or 'lognormal' must be given");

    auto wrap = [](auto&& build) {
        try {
            return build();
        } catch (const ModelFileError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw ModelFileError(e.what());
        }
    };
    if (has_heston) {
        const auto& h = j.at("heston");
        if (!h.is_object()) throw ModelFileError("key 'heston' must be an object");
        detail::reject_unknown(h, {"v0", "kappa", "theta", "sigma", "rho"}, "heston.");
        HestonParams p{number_at(h, "v0", "heston."), number_at(h, "kappa", "heston."),
                       number_at(h, "theta", "heston."), number_at(h, "sigma", "heston."),
                       number_at(h, "rho", "heston.")};
        return wrap([&] { return ModelSpec::heston(F, T, B, p); });
    }
    const auto& l = j.at("lognormal");
    if (!l.is_object()) throw ModelFileError("key 'lognormal' must be an object");
    detail::reject_unknown(l, {"vol"}, "lognormal.");
    const double vol = number_at(l, "vol", "lognormal.");
    return wrap([&] { return ModelSpec::lognormal(F, T, B, vol); });
}

inline ModelSpec parse_model(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ModelFileError("JSON syntax error at line " + std::to_string(detail::line_of(text, e.byte)) + ": " +
                             e.what());
    }
    return model_from_json(j);
}

inline ModelSpec load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelFileError("cannot open model file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_model(ss.str());
    } catch (const ModelFileError& e) {
        throw ModelFileError(path + ": " + e.what());
    }
}

inline nlohmann::json model_to_json(const ModelSpec& model) {
    nlohmann::json j{{"forward", model.forward()}, {"maturity", model.maturity()}, {"discount", model.discount()}};
    if (const auto* h = std::get_if<HestonParams>(&model.dynamics()))
        j["heston"] = {{"v0", h->v0}, {"kappa", h->kappa}, {"theta", h->theta}, {"sigma", h->sigma}, {"rho", h->rho}};
    else
        j["lognormal"] = {{"vol", std::get<LognormalParams>(model.dynamics()).vol}};
    return j;
}

inline nlohmann::json to_json(const WaveletGrid& g) {
    return {{"m", g.m}, {"k1", g.k1}, {"k2", g.k2}, {"J", g.J}, {"N", g.payoff_size()},
            {"a", g.a}, {"b", g.b}, {"L", g.L}};
}

inline nlohmann::json to_json(const PricingResult& r) {
    nlohmann::json j{{"price", r.price},
                     {"grid", to_json(r.grid)},
                     {"density_strategy", r.density_strategy},
                     {"payoff_strategy", r.payoff_strategy},
                     {"cf_evals", r.cf_evals},
                     {"elapsed_ns", r.elapsed.count()}};
    j["reference_price"] = r.reference_price ? nlohmann::json(*r.reference_price) : nlohmann::json(nullptr);
    j["abs_error"] = r.abs_error ? nlohmann::json(*r.abs_error) : nlohmann::json(nullptr);
    return j;
}

}  // namespace swift
