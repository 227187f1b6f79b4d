#pragma once

/// @file scenario.hpp
/// Network description and solver configuration for a decode-and-forward
/// relay network with one secret and one public message.
///
/// Configuration documents are JSON:
///
///     { "scenario": { "n_relays": 2, "n_eves": 1,
///                     "alpha0": [re, im], "beta0": [[re, im]],
///                     "gamma": [[re, im], ...], "alpha": [[re, im], ...],
///                     "beta": [[[re, im], ...]],            // J rows of N
///                     "noise_power": 1.0, "eve_csi": "perfect",
///                     "sigma2_beta0": [...], "sigma2_beta": [[...]] },
///       "solve":    { "total_power_db": 6, "public_rate": 0.2, ... } }
///
/// Powers in the document are in dB relative to the noise power and are
/// converted to linear units once, at load.

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dfsec {

using Complex = std::complex<double>;
using ComplexGain = Complex;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Thrown for malformed documents (syntax or schema).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when a well-formed document describes an invalid scenario.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class EveCsi { Perfect, Statistical };

inline std::string_view to_string(EveCsi csi) {
    return csi == EveCsi::Perfect ? "perfect" : "statistical";
}

/// All channel gains of the network. Row vectors of the model are stored as
/// column vectors; `beta` is J x N with row j the relay -> eavesdropper j gains.
struct ChannelScenario {
    int n_relays = 0;
    int n_eves = 0;
    ComplexGain alpha0{};
    CVector beta0;   // J, empty when statistical and absent
    CVector gamma;   // N
    CVector alpha;   // N
    CMatrix beta;    // J x N, empty when statistical and absent
    double noise_power = 1.0;
    EveCsi eve_csi = EveCsi::Perfect;
    RVector sigma2_beta0;  // J, empty when absent
    RMatrix sigma2_beta;   // J x N, empty when absent

    bool has_instantaneous_eve_gains() const {
        return beta0.size() == n_eves && beta.rows() == n_eves &&
               (n_eves == 0 || beta.cols() == n_relays);
    }
    bool has_eve_statistics() const {
        return n_eves > 0 && sigma2_beta0.size() == n_eves && sigma2_beta.rows() == n_eves &&
               sigma2_beta.cols() == n_relays;
    }
};

struct SolveConfig {
    double total_power_db = 0.0;
    double total_power = 1.0;  // linear, derived from total_power_db at load
    double public_rate = 0.0;
    int power_steps = 50;
    double secrecy_bisect_tol = 1e-6;
    double sdp_tol = 1e-8;
    bool eve_must_decode_public = false;
    int mc_samples = 100000;
    std::uint64_t rng_seed = 0;
    bool verify_monotone = false;
    bool include_m_equals_M = false;
};

struct Config {
    ChannelScenario scenario;
    SolveConfig solve;
};

inline double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

/// Recomputes the linear total power from its dB value.
inline void set_total_power_db(SolveConfig& cfg, double db, double noise_power) {
    cfg.total_power_db = db;
    cfg.total_power = noise_power * db_to_linear(db);
}

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

inline bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i)
        if (!finite(Complex(m(i)))) return false;
    return true;
}

}  // namespace detail

inline void validate(const ChannelScenario& sc) {
    using detail::require;
    require(sc.n_relays >= 1, "n_relays must be positive");
    require(sc.n_eves >= 0, "n_eves must be nonnegative");
    require(sc.gamma.size() == sc.n_relays, "gamma must have n_relays entries");
    require(sc.alpha.size() == sc.n_relays, "alpha must have n_relays entries");
    require(std::isfinite(sc.noise_power) && sc.noise_power > 0.0, "noise_power must be positive");
    require(detail::finite(sc.alpha0), "alpha0 must be finite");
    require(detail::all_finite(sc.gamma) && detail::all_finite(sc.alpha),
            "gamma and alpha must be finite");

    const bool any_inst = sc.beta0.size() != 0 || sc.beta.size() != 0;
    if (sc.eve_csi == EveCsi::Perfect || any_inst) {
        require(sc.beta0.size() == sc.n_eves, "beta0 must have n_eves entries");
        require(sc.beta.rows() == sc.n_eves && (sc.n_eves == 0 || sc.beta.cols() == sc.n_relays),
                "beta must be n_eves x n_relays");
        require(detail::all_finite(sc.beta0) && detail::all_finite(sc.beta),
                "beta0 and beta must be finite");
    }
    const bool any_stat = sc.sigma2_beta0.size() != 0 || sc.sigma2_beta.size() != 0;
    if (sc.eve_csi == EveCsi::Statistical || any_stat) {
        require(sc.sigma2_beta0.size() == sc.n_eves, "sigma2_beta0 must have n_eves entries");
        require(sc.sigma2_beta.rows() == sc.n_eves &&
                    (sc.n_eves == 0 || sc.sigma2_beta.cols() == sc.n_relays),
                "sigma2_beta must be n_eves x n_relays");
        for (Eigen::Index i = 0; i < sc.sigma2_beta0.size(); ++i)
            require(std::isfinite(sc.sigma2_beta0(i)) && sc.sigma2_beta0(i) > 0.0,
                    "sigma2_beta0 entries must be positive");
        for (Eigen::Index i = 0; i < sc.sigma2_beta.size(); ++i)
            require(std::isfinite(sc.sigma2_beta(i)) && sc.sigma2_beta(i) > 0.0,
                    "sigma2_beta entries must be positive");
    }
}

inline void validate(const SolveConfig& cfg) {
    using detail::require;
    require(std::isfinite(cfg.total_power_db), "total_power_db must be finite");
    require(std::isfinite(cfg.total_power) && cfg.total_power > 0.0, "total_power must be positive");
    require(std::isfinite(cfg.public_rate) && cfg.public_rate >= 0.0,
            "public_rate must be nonnegative");
    require(cfg.power_steps >= 1, "power_steps must be at least 1");
    require(cfg.secrecy_bisect_tol > 0.0, "secrecy_bisect_tol must be positive");
    require(cfg.sdp_tol > 0.0, "sdp_tol must be positive");
    require(cfg.mc_samples >= 1, "mc_samples must be positive");
}

inline void validate(const Config& c) {
    validate(c.scenario);
    validate(c.solve);
    detail::require(!(c.solve.eve_must_decode_public && c.scenario.eve_csi == EveCsi::Statistical),
                    "eve_must_decode_public requires perfect eavesdropper CSI");
}

/// Keeps only the first `j` eavesdroppers.
inline ChannelScenario with_first_eves(const ChannelScenario& sc, int j) {
    detail::require(j >= 0 && j <= sc.n_eves, "eavesdropper subset out of range");
    ChannelScenario out = sc;
    out.n_eves = j;
    if (sc.beta0.size() == sc.n_eves) out.beta0 = sc.beta0.head(j).eval();
    if (sc.beta.rows() == sc.n_eves) out.beta = sc.beta.topRows(j).eval();
    if (sc.sigma2_beta0.size() == sc.n_eves) out.sigma2_beta0 = sc.sigma2_beta0.head(j).eval();
    if (sc.sigma2_beta.rows() == sc.n_eves) out.sigma2_beta = sc.sigma2_beta.topRows(j).eval();
    return out;
}

namespace detail {

using nlohmann::json;

[[noreturn]] inline void schema_error(const std::string& field, const std::string& what) {
    throw ParseError(field + ": " + what);
}

inline const json& member(const json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) schema_error(path + "." + key, "missing required field");
    return *it;
}

inline double read_real(const json& v, const std::string& path) {
    if (!v.is_number()) schema_error(path, "expected a number");
    return v.get<double>();
}

inline int read_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) schema_error(path, "expected an integer");
    return v.get<int>();
}

inline bool read_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) schema_error(path, "expected a boolean");
    return v.get<bool>();
}

inline Complex read_complex(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        schema_error(path, "expected [re, im]");
    return {v[0].get<double>(), v[1].get<double>()};
}

inline CVector read_cvector(const json& v, const std::string& path) {
    if (!v.is_array()) schema_error(path, "expected an array of [re, im]");
    CVector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = read_complex(v[i], path + "[" + std::to_string(i) + "]");
    return out;
}

inline RVector read_rvector(const json& v, const std::string& path) {
    if (!v.is_array()) schema_error(path, "expected an array of numbers");
    RVector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = read_real(v[i], path + "[" + std::to_string(i) + "]");
    return out;
}

template <typename Matrix, typename ReadRow>
Matrix read_rows(const json& v, const std::string& path, ReadRow read_row) {
    if (!v.is_array()) schema_error(path, "expected an array of rows");
    if (v.empty()) return Matrix(0, 0);
    Matrix out;
    for (std::size_t r = 0; r < v.size(); ++r) {
        const std::string rp = path + "[" + std::to_string(r) + "]";
        auto row = read_row(v[r], rp);
        if (r == 0) out.resize(static_cast<Eigen::Index>(v.size()), row.size());
        if (row.size() != out.cols()) schema_error(rp, "ragged matrix row");
        out.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return out;
}

inline std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json cvector_json(const CVector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_json(v(i)));
    return a;
}

}  // namespace detail

/// Parses and validates a configuration document.
inline Config load_scenario(std::string_view text) {
    using detail::json;
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        auto [line, col] = detail::line_column(text, e.byte);
        throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                         e.what());
    }
    if (!doc.is_object()) detail::schema_error("<root>", "expected an object");

    Config cfg;
    ChannelScenario& sc = cfg.scenario;
    const json& s = detail::member(doc, "scenario", "<root>");
    if (!s.is_object()) detail::schema_error("scenario", "expected an object");

    sc.n_relays = detail::read_int(detail::member(s, "n_relays", "scenario"), "scenario.n_relays");
    sc.n_eves = detail::read_int(detail::member(s, "n_eves", "scenario"), "scenario.n_eves");
    sc.alpha0 = detail::read_complex(detail::member(s, "alpha0", "scenario"), "scenario.alpha0");
    sc.gamma = detail::read_cvector(detail::member(s, "gamma", "scenario"), "scenario.gamma");
    sc.alpha = detail::read_cvector(detail::member(s, "alpha", "scenario"), "scenario.alpha");
    if (auto it = s.find("beta0"); it != s.end()) sc.beta0 = detail::read_cvector(*it, "scenario.beta0");
    if (auto it = s.find("beta"); it != s.end())
        sc.beta = detail::read_rows<CMatrix>(*it, "scenario.beta", detail::read_cvector);
    if (auto it = s.find("noise_power"); it != s.end())
        sc.noise_power = detail::read_real(*it, "scenario.noise_power");
    if (auto it = s.find("eve_csi"); it != s.end()) {
        if (!it->is_string()) detail::schema_error("scenario.eve_csi", "expected a string");
        const auto v = it->get<std::string>();
        if (v == "perfect")
            sc.eve_csi = EveCsi::Perfect;
        else if (v == "statistical")
            sc.eve_csi = EveCsi::Statistical;
        else
            detail::schema_error("scenario.eve_csi", "expected \"perfect\" or \"statistical\"");
    }
    if (auto it = s.find("sigma2_beta0"); it != s.end())
        sc.sigma2_beta0 = detail::read_rvector(*it, "scenario.sigma2_beta0");
    if (auto it = s.find("sigma2_beta"); it != s.end())
        sc.sigma2_beta = detail::read_rows<RMatrix>(*it, "scenario.sigma2_beta", detail::read_rvector);
    if (sc.n_eves == 0) {
        // Zero-row matrices keep their relay dimension for downstream code.
        if (sc.beta.size() == 0) sc.beta.resize(0, sc.n_relays);
        if (sc.sigma2_beta.size() == 0 && s.contains("sigma2_beta")) sc.sigma2_beta.resize(0, sc.n_relays);
    }

    SolveConfig& sv = cfg.solve;
    double power_db = 0.0;
    if (auto it = doc.find("solve"); it != doc.end()) {
        const json& o = *it;
        if (!o.is_object()) detail::schema_error("solve", "expected an object");
        power_db = detail::read_real(detail::member(o, "total_power_db", "solve"), "solve.total_power_db");
        if (auto f = o.find("public_rate"); f != o.end()) sv.public_rate = detail::read_real(*f, "solve.public_rate");
        if (auto f = o.find("power_steps"); f != o.end()) sv.power_steps = detail::read_int(*f, "solve.power_steps");
        if (auto f = o.find("secrecy_bisect_tol"); f != o.end())
            sv.secrecy_bisect_tol = detail::read_real(*f, "solve.secrecy_bisect_tol");
        if (auto f = o.find("sdp_tol"); f != o.end()) sv.sdp_tol = detail::read_real(*f, "solve.sdp_tol");
        if (auto f = o.find("eve_must_decode_public"); f != o.end())
            sv.eve_must_decode_public = detail::read_bool(*f, "solve.eve_must_decode_public");
        if (auto f = o.find("mc_samples"); f != o.end()) sv.mc_samples = detail::read_int(*f, "solve.mc_samples");
        if (auto f = o.find("rng_seed"); f != o.end()) {
            if (!f->is_number_unsigned() && !(f->is_number_integer() && f->get<long long>() >= 0))
                detail::schema_error("solve.rng_seed", "expected a nonnegative integer");
            sv.rng_seed = f->get<std::uint64_t>();
        }
        if (auto f = o.find("verify_monotone"); f != o.end())
            sv.verify_monotone = detail::read_bool(*f, "solve.verify_monotone");
        if (auto f = o.find("include_m_equals_M"); f != o.end())
            sv.include_m_equals_M = detail::read_bool(*f, "solve.include_m_equals_M");
    }
    set_total_power_db(sv, power_db, sc.noise_power);
    validate(cfg);
    return cfg;
}

inline Config load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_scenario(ss.str());
}

/// Emits a document that `load_scenario` maps back to an identical Config.
inline std::string serialize(const Config& cfg) {
    using detail::json;
    const ChannelScenario& sc = cfg.scenario;
    json s;
    s["n_relays"] = sc.n_relays;
    s["n_eves"] = sc.n_eves;
    s["alpha0"] = detail::complex_json(sc.alpha0);
    s["gamma"] = detail::cvector_json(sc.gamma);
    s["alpha"] = detail::cvector_json(sc.alpha);
    if (sc.has_instantaneous_eve_gains()) {
        s["beta0"] = detail::cvector_json(sc.beta0);
        json rows = json::array();
        for (Eigen::Index j = 0; j < sc.beta.rows(); ++j) rows.push_back(detail::cvector_json(sc.beta.row(j).transpose()));
        s["beta"] = rows;
    }
    s["noise_power"] = sc.noise_power;
    s["eve_csi"] = std::string(to_string(sc.eve_csi));
    if (sc.has_eve_statistics()) {
        s["sigma2_beta0"] = std::vector<double>(sc.sigma2_beta0.data(), sc.sigma2_beta0.data() + sc.sigma2_beta0.size());
        json rows = json::array();
        for (Eigen::Index j = 0; j < sc.sigma2_beta.rows(); ++j) {
            json row = json::array();
            for (Eigen::Index i = 0; i < sc.sigma2_beta.cols(); ++i) row.push_back(sc.sigma2_beta(j, i));
            rows.push_back(row);
        }
        s["sigma2_beta"] = rows;
    }
    const SolveConfig& v = cfg.solve;
    json o;
    o["total_power_db"] = v.total_power_db;
    o["public_rate"] = v.public_rate;
    o["power_steps"] = v.power_steps;
    o["secrecy_bisect_tol"] = v.secrecy_bisect_tol;
    o["sdp_tol"] = v.sdp_tol;
    o["eve_must_decode_public"] = v.eve_must_decode_public;
    o["mc_samples"] = v.mc_samples;
    o["rng_seed"] = v.rng_seed;
    o["verify_monotone"] = v.verify_monotone;
    o["include_m_equals_M"] = v.include_m_equals_M;
    json doc;
    doc["scenario"] = s;
    doc["solve"] = o;
    return doc.dump(2) + "\n";
}

}  // namespace dfsec
