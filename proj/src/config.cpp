#include "beamcontact/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace beamcontact {

namespace {

const std::set<std::string, std::less<>> kKnownKeys = {
    "a", "b", "alpha1", "alpha2", "beta1", "beta2", "K", "g",
    "N", "Ns", "tol", "max_iter", "seed", "out"};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry {
    std::string value;
    std::size_t line;
};

double to_real(const std::string& key, const Entry& e) {
    char* end = nullptr;
    const double v = std::strtod(e.value.c_str(), &end);
    if (e.value.empty() || end != e.value.c_str() + e.value.size()) {
        throw ConfigError("line " + std::to_string(e.line) + ": '" + key +
                              "' expects a number, got '" + e.value + "'",
                          e.line, key);
    }
    if (!std::isfinite(v)) {
        throw ConfigError("'" + key + "' must be finite", e.line, key);
    }
    return v;
}

std::uint64_t to_count(const std::string& key, std::string_view text, std::size_t line) {
    std::uint64_t v = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc() || ptr != last) {
        throw ConfigError("line " + std::to_string(line) + ": '" + key +
                              "' expects a non-negative integer, got '" + std::string(text) + "'",
                          line, key);
    }
    return v;
}

}  // namespace

PiecewiseLinearContact StudyConfig::contact() const {
    return PiecewiseLinearContact{K, [g = g](double x) { return g(x); },
                                  [gp = g_prime](double x) { return gp(x); }};
}

StudyConfig parse_config(std::string_view text) {
    std::map<std::string, Entry, std::less<>> entries;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        auto raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        const auto line = trim(raw);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'",
                              line_no, "");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!kKnownKeys.contains(key)) {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'",
                              line_no, key);
        }
        if (entries.contains(key)) {
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'",
                              line_no, key);
        }
        entries.emplace(key, Entry{value, line_no});
    }

    StudyConfig cfg;
    auto real = [&](const char* key, double& field) {
        if (auto it = entries.find(key); it != entries.end()) field = to_real(key, it->second);
    };
    real("a", cfg.spec.a);
    real("b", cfg.spec.b);
    real("alpha1", cfg.spec.alpha1);
    real("alpha2", cfg.spec.alpha2);
    real("beta1", cfg.spec.beta1);
    real("beta2", cfg.spec.beta2);
    real("K", cfg.K);

    auto line_of = [&](const char* key) -> std::size_t {
        auto it = entries.find(key);
        return it == entries.end() ? 0 : it->second.line;
    };

    if (!(cfg.spec.b > cfg.spec.a)) {
        throw ConfigError("'b' must be greater than 'a'", line_of("b"), "b");
    }
    if (cfg.K < 0.0) {
        throw ConfigError("'K' must be >= 0", line_of("K"), "K");
    }

    if (auto it = entries.find("g"); it != entries.end()) {
        cfg.g_text = it->second.value;
        try {
            cfg.g = Expression::parse(cfg.g_text);
        } catch (const ExpressionError& e) {
            throw ConfigError("line " + std::to_string(it->second.line) + ": 'g' " + e.what(),
                              it->second.line, "g");
        }
    }
    cfg.g_prime = cfg.g.derivative();
    constexpr int kProbe = 200;
    for (int k = 0; k <= kProbe; ++k) {
        const double x = cfg.spec.a + cfg.spec.length() * k / kProbe;
        if (!std::isfinite(cfg.g(x)) || !std::isfinite(cfg.g_prime(x))) {
            throw ConfigError("'g' is not finite on [a, b]", line_of("g"), "g");
        }
    }

    if (auto it = entries.find("N"); it != entries.end()) {
        cfg.N = to_count("N", it->second.value, it->second.line);
        if (cfg.N < 5) {
            throw ConfigError("'N' must be >= 5", it->second.line, "N");
        }
    }
    if (auto it = entries.find("Ns"); it != entries.end()) {
        cfg.Ns.clear();
        std::stringstream ss(it->second.value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            cfg.Ns.push_back(to_count("Ns", trim(item), it->second.line));
        }
        if (cfg.Ns.empty()) {
            throw ConfigError("'Ns' must list at least one N", it->second.line, "Ns");
        }
        for (std::size_t i = 0; i < cfg.Ns.size(); ++i) {
            if (cfg.Ns[i] < 5) {
                throw ConfigError("'Ns' entries must be >= 5", it->second.line, "Ns");
            }
            if (i > 0 && cfg.Ns[i] <= cfg.Ns[i - 1]) {
                throw ConfigError("'Ns' must be strictly increasing", it->second.line, "Ns");
            }
        }
    }
    if (auto it = entries.find("tol"); it != entries.end()) {
        const double tol = to_real("tol", it->second);
        if (!(tol > 0.0)) {
            throw ConfigError("'tol' must be positive", it->second.line, "tol");
        }
        cfg.tol = tol;
    }
    if (auto it = entries.find("max_iter"); it != entries.end()) {
        cfg.max_iter = to_count("max_iter", it->second.value, it->second.line);
        if (cfg.max_iter == 0) {
            throw ConfigError("'max_iter' must be >= 1", it->second.line, "max_iter");
        }
    }
    if (auto it = entries.find("seed"); it != entries.end()) {
        cfg.seed = to_count("seed", it->second.value, it->second.line);
    }
    if (auto it = entries.find("out"); it != entries.end()) {
        if (it->second.value.empty()) {
            throw ConfigError("'out' must not be empty", it->second.line, "out");
        }
        cfg.out = it->second.value;
    }
    return cfg;
}

StudyConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'", 0, "");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace beamcontact
