#ifndef CATDIMER_CONFIG_HPP
#define CATDIMER_CONFIG_HPP

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "model.hpp"

namespace catdimer {

/*
 * Flat key=value config with '#' comments.  Recognized keys: delta, lambda,
 * u, gamma, kappa, d_delta, d_lambda, d_u, nmax_a, nmax_b.  Unknown keys are
 * rejected so typos fail loudly.
 */
class Config
{
public:
    Config() = default;

    static Config parse_file(const std::string& path)
    {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot open " + path);
        std::stringstream ss;
        ss << f.rdbuf();
        return parse_string(ss.str(), path);
    }

    static Config parse_string(const std::string& text, const std::string& origin = "<string>")
    {
        Config c;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
            std::string key = trim(line.substr(0, eq));
            std::string val = trim(line.substr(eq + 1));
            if (!is_known(key))
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
            c.m_kv[key] = val;
        }
        return c;
    }

    bool has(const std::string& key) const { return m_kv.count(key) > 0; }

    double get_double(const std::string& key, double fallback) const
    {
        auto it = m_kv.find(key);
        if (it == m_kv.end()) return fallback;
        try {
            std::size_t pos = 0;
            double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument(it->second);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "': cannot parse '" + it->second + "' as number");
        }
    }

    int get_int(const std::string& key, int fallback) const
    {
        double v = get_double(key, static_cast<double>(fallback));
        int i = static_cast<int>(v);
        if (static_cast<double>(i) != v) throw ConfigError("key '" + key + "' must be an integer");
        return i;
    }

    void set(const std::string& key, double value)
    {
        if (!is_known(key)) throw ConfigError("unknown key '" + key + "'");
        std::ostringstream os;
        os.precision(17);
        os << value;
        m_kv[key] = os.str();
    }

    ABParams ab_params() const
    {
        ABParams p;
        p.Delta = get_double("delta", 0.0);
        p.lambda = get_double("lambda", 0.0);
        p.U = get_double("u", 1.0);
        p.gamma = get_double("gamma", 0.0);
        p.kappa = get_double("kappa", 0.0);
        return p;
    }

    MismatchParams mismatch_params() const
    {
        return {get_double("d_delta", 0.0), get_double("d_lambda", 0.0), get_double("d_u", 0.0)};
    }

    std::string serialize() const
    {
        std::ostringstream os;
        for (const auto& [k, v] : m_kv) os << k << "=" << v << "\n";
        return os.str();
    }

    static bool is_known(const std::string& key)
    {
        static const char* keys[] = {"delta", "lambda", "u", "gamma", "kappa",
                                     "d_delta", "d_lambda", "d_u", "nmax_a", "nmax_b"};
        for (const char* k : keys)
            if (key == k) return true;
        return false;
    }

private:
    static std::string trim(const std::string& s)
    {
        auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    std::map<std::string, std::string> m_kv;
};

inline Config to_config(const ABParams& p, const MismatchParams& m = {})
{
    Config c;
    c.set("delta", p.Delta);
    c.set("lambda", p.lambda);
    c.set("u", p.U);
    c.set("gamma", p.gamma);
    c.set("kappa", p.kappa);
    c.set("d_delta", m.dDelta);
    c.set("d_lambda", m.dLambda);
    c.set("d_u", m.dU);
    return c;
}

} // namespace catdimer

#endif // CATDIMER_CONFIG_HPP
