#pragma once

// Run records: the JSON / CSV files written by the command line tool.
// Complex values travel as "a+bi" strings with 17 significant digits so that a
// record read back from disk compares equal to the one that was written.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>
#include "lve/kernel.hpp"

#ifndef LVE_VERSION
#define LVE_VERSION "0.1.0"
#endif

namespace lve {

inline std::string format_real(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string format_complex(cplx z)
{
    std::string s = format_real(z.real());
    const std::string im = format_real(z.imag());
    if (im.front() != '-' && im.front() != '+') s += '+';
    return s + im + "i";
}

namespace detail {

inline bool parse_real(std::string_view s, double& out)
{
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

} // namespace detail

/// Parses "a", "a+bi", "a-bi", "bi", "i", "-i" (whitespace-free, optional exponents).
inline std::optional<cplx> parse_complex(std::string_view s)
{
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    if (s.back() != 'i' && s.back() != 'j') {
        double re = 0.0;
        if (!detail::parse_real(s, re)) return std::nullopt;
        return cplx(re, 0.0);
    }
    s.remove_suffix(1);
    // split at the last sign that is not the leading one and not part of an exponent
    std::size_t split = std::string_view::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    std::string_view re_part = split == std::string_view::npos ? std::string_view{} : s.substr(0, split);
    std::string_view im_part = split == std::string_view::npos ? s : s.substr(split);
    double re = 0.0, im = 0.0;
    if (!re_part.empty() && !detail::parse_real(re_part, re)) return std::nullopt;
    if (im_part.empty() || im_part == "+") im = 1.0;
    else if (im_part == "-") im = -1.0;
    else if (!detail::parse_real(im_part, im)) return std::nullopt;
    return cplx(re, im);
}

struct NamedResult {
    std::string name;
    cplx value;
    double error = 0.0;
    friend bool operator==(const NamedResult&, const NamedResult&) = default;
};

struct RunRecord {
    std::string command;
    ModelSpec spec;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    std::vector<NamedResult> results;
    std::optional<double> wall_time; // serialized only when set
    std::uint64_t seed = 0;
    std::string artifact_version = LVE_VERSION;

    void add(std::string name, cplx value, double error = 0.0) { results.push_back({std::move(name), value, error}); }
};

inline nlohmann::ordered_json to_json(const RunRecord& r)
{
    nlohmann::ordered_json j;
    j["command"] = r.command;
    j["artifact_version"] = r.artifact_version;
    j["spec"] = {{"p", r.spec.p}, {"lambda", format_complex(r.spec.lambda)}, {"epsilon", format_real(r.spec.epsilon)}};
    j["seed"] = r.seed;
    j["config"] = r.config;
    auto& res = j["results"] = nlohmann::ordered_json::array();
    for (const auto& n : r.results)
        res.push_back({{"name", n.name}, {"value", format_complex(n.value)}, {"error", format_real(n.error)}});
    if (r.wall_time) j["wall_time"] = format_real(*r.wall_time);
    return j;
}

inline RunRecord record_from_json(const nlohmann::ordered_json& j)
{
    auto real = [](const nlohmann::ordered_json& v) {
        double x = 0.0;
        if (!detail::parse_real(v.get<std::string>(), x)) throw contract_error("malformed real in run record");
        return x;
    };
    auto complex = [](const nlohmann::ordered_json& v) {
        const auto z = parse_complex(v.get<std::string>());
        if (!z) throw contract_error("malformed complex in run record");
        return *z;
    };
    RunRecord r;
    r.command = j.at("command").get<std::string>();
    r.artifact_version = j.at("artifact_version").get<std::string>();
    r.spec.p = j.at("spec").at("p").get<int>();
    r.spec.lambda = complex(j.at("spec").at("lambda"));
    r.spec.epsilon = real(j.at("spec").at("epsilon"));
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config = j.at("config");
    for (const auto& n : j.at("results")) r.add(n.at("name").get<std::string>(), complex(n.at("value")), real(n.at("error")));
    if (j.contains("wall_time")) r.wall_time = real(j.at("wall_time"));
    return r;
}

inline std::string to_csv(const RunRecord& r)
{
    std::string out = "name,re,im,error\n";
    for (const auto& n : r.results)
        out += n.name + "," + format_real(n.value.real()) + "," + format_real(n.value.imag()) + "," + format_real(n.error) + "\n";
    return out;
}

inline std::vector<NamedResult> results_from_csv(const std::string& text)
{
    std::vector<NamedResult> out;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "name,re,im,error") throw contract_error("unexpected CSV header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (f.size() != 4) throw contract_error("malformed CSV row: " + line);
        double re = 0, im = 0, err = 0;
        if (!detail::parse_real(f[1], re) || !detail::parse_real(f[2], im) || !detail::parse_real(f[3], err))
            throw contract_error("malformed CSV number: " + line);
        out.push_back({f[0], {re, im}, err});
    }
    return out;
}

inline void write_text(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw error("cannot open " + path + " for writing");
    f << text;
}

inline std::string read_text(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw error("cannot open " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

inline void save_json(const RunRecord& r, const std::string& path) { write_text(path, to_json(r).dump(2) + "\n"); }
inline RunRecord load_json(const std::string& path) { return record_from_json(nlohmann::ordered_json::parse(read_text(path))); }
inline void save_csv(const RunRecord& r, const std::string& path) { write_text(path, to_csv(r)); }
inline std::vector<NamedResult> load_csv(const std::string& path) { return results_from_csv(read_text(path)); }

} // namespace lve
