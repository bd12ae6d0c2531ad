#include "subcover/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace subcover {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': cannot parse number '" + v + "'");
    }
}

long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': cannot parse integer '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("config key '" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::string s = v;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream is(s);
    std::vector<double> out;
    std::string tok;
    while (is >> tok)
        out.push_back(to_double(key, tok));
    if (out.empty())
        throw std::invalid_argument("config key '" + key + "': empty list");
    return out;
}

} // namespace

std::map<std::string, std::string> read_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": empty key");
        kv[key] = val;
    }
    return kv;
}

SubordinatorSpec parse_spec_kv(const std::map<std::string, std::string>& kv) {
    auto get = [&](const std::string& k) -> const std::string* {
        auto it = kv.find(k);
        return it == kv.end() ? nullptr : &it->second;
    };
    const std::string* fam = get("family");
    if (!fam)
        throw std::invalid_argument("config key 'family': missing");
    const double drift = get("drift") ? to_double("drift", *get("drift")) : 0.0;

    std::set<std::string> known{"family", "drift"};
    SubordinatorSpec spec;
    if (*fam == "drift_only") {
        spec = SubordinatorSpec::make_drift_only(drift);
    } else if (*fam == "stable") {
        known.insert("alpha");
        if (!get("alpha"))
            throw std::invalid_argument("config key 'alpha': required for the stable family");
        spec = SubordinatorSpec::make_stable(to_double("alpha", *get("alpha")), drift);
    } else if (*fam == "gamma") {
        known.insert("a");
        known.insert("b");
        if (!get("a") || !get("b"))
            throw std::invalid_argument("config keys 'a','b': required for the gamma family");
        spec = SubordinatorSpec::make_gamma(to_double("a", *get("a")),
                                            to_double("b", *get("b")), drift);
    } else if (*fam == "inverse_gaussian") {
        known.insert("mu");
        known.insert("lam");
        if (!get("mu") || !get("lam"))
            throw std::invalid_argument(
                "config keys 'mu','lam': required for the inverse_gaussian family");
        spec = SubordinatorSpec::make_inverse_gaussian(to_double("mu", *get("mu")),
                                                       to_double("lam", *get("lam")), drift);
    } else if (*fam == "compound_poisson") {
        known.insert("rate");
        known.insert("jump");
        known.insert("jump_param");
        if (!get("rate"))
            throw std::invalid_argument("config key 'rate': required for compound_poisson");
        const std::string jump = get("jump") ? *get("jump") : "fixed";
        const double jp = get("jump_param") ? to_double("jump_param", *get("jump_param")) : 1.0;
        if (jump == "fixed")
            spec = SubordinatorSpec::make_compound_poisson_fixed(
                to_double("rate", *get("rate")), jp, drift);
        else if (jump == "exponential")
            spec = SubordinatorSpec::make_compound_poisson_exp(
                to_double("rate", *get("rate")), jp, drift);
        else
            throw std::invalid_argument("config key 'jump': must be fixed or exponential");
    } else if (*fam == "truncated_general") {
        known.insert("trunc");
        known.insert("tail_alpha");
        if (!get("trunc") || !get("tail_alpha"))
            throw std::invalid_argument(
                "config keys 'trunc','tail_alpha': required for truncated_general "
                "(file configs support the built-in power tail only)");
        const double a = to_double("tail_alpha", *get("tail_alpha"));
        if (!(a > 0.0) || !(a < 1.0))
            throw std::invalid_argument("config key 'tail_alpha': must lie in (0,1)");
        const double gam = std::tgamma(1.0 - a);
        LevyTail tail;
        tail.eval = [a, gam](double x) { return std::pow(x, -a) / gam; };
        spec = SubordinatorSpec::make_truncated_general(
            tail, to_double("trunc", *get("trunc")), drift);
    } else {
        throw std::invalid_argument("config key 'family': unknown family '" + *fam + "'");
    }
    for (const auto& [k, v] : kv)
        if (!known.count(k))
            throw std::invalid_argument("config key '" + k + "': unknown spec key");
    return spec;
}

SubordinatorSpec read_spec_file(const std::string& path) {
    return parse_spec_kv(read_kv_file(path));
}

RunConfig parse_config_kv(const std::map<std::string, std::string>& kv,
                          const std::string& base_dir) {
    RunConfig cfg;
    std::map<std::string, std::string> spec_kv;
    bool have_inline_spec = false;
    bool have_spec_file = false;
    bool have_deltas = false;

    for (const auto& [key, val] : kv) {
        if (key.rfind("spec.", 0) == 0) {
            spec_kv[key.substr(5)] = val;
            have_inline_spec = true;
        } else if (key.rfind("tol.", 0) == 0) {
            cfg.opt.tol[key.substr(4)] = to_double(key, val);
        } else if (key == "spec_file") {
            const std::string p =
                (!base_dir.empty() && val.find('/') != 0) ? base_dir + "/" + val : val;
            cfg.spec = read_spec_file(p);
            cfg.spec_source = p;
            have_spec_file = true;
        } else if (key == "experiment") {
            cfg.experiment = val;
        } else if (key == "t") {
            cfg.opt.t = to_double(key, val);
        } else if (key == "deltas") {
            cfg.delta_spec.kind = DeltaSpec::Kind::explicit_list;
            cfg.delta_spec.list = to_list(key, val);
            have_deltas = true;
        } else if (key == "delta_log") {
            const auto v = to_list(key, val);
            if (v.size() != 3)
                throw std::invalid_argument(
                    "config key 'delta_log': expected 'min max per_decade'");
            cfg.delta_spec.kind = DeltaSpec::Kind::log_spaced;
            cfg.delta_spec.log_min = v[0];
            cfg.delta_spec.log_max = v[1];
            cfg.delta_spec.per_decade = static_cast<int>(v[2]);
            have_deltas = true;
        } else if (key == "delta_grid") {
            const auto v = to_list(key, val);
            if (v.size() != 2)
                throw std::invalid_argument("config key 'delta_grid': expected 'r j_max'");
            cfg.delta_spec.kind = DeltaSpec::Kind::geometric;
            cfg.delta_spec.grid_r = v[0];
            cfg.delta_spec.grid_j_max = static_cast<int>(v[1]);
            have_deltas = true;
        } else if (key == "replicas") {
            cfg.opt.replicas = to_int(key, val);
        } else if (key == "seed") {
            cfg.opt.seed = static_cast<uint64_t>(to_int(key, val));
        } else if (key == "workers") {
            cfg.opt.workers = static_cast<int>(to_int(key, val));
        } else if (key == "engine") {
            if (val == "events")
                cfg.opt.engine.kind = EngineKind::events;
            else if (val == "skeleton")
                cfg.opt.engine.kind = EngineKind::skeleton;
            else
                throw std::invalid_argument("config key 'engine': must be events or skeleton");
        } else if (key == "eps") {
            cfg.opt.engine.eps = to_double(key, val);
        } else if (key == "compensate") {
            cfg.opt.engine.compensate = to_bool(key, val);
        } else if (key == "h") {
            cfg.opt.engine.h = to_double(key, val);
        } else if (key == "u_replicas") {
            cfg.opt.u_replicas = to_int(key, val);
        } else if (key == "u_method") {
            cfg.u_method_auto = false;
            if (val == "asymptotic")
                cfg.u_method = PotentialMethod::asymptotic;
            else if (val == "series")
                cfg.u_method = PotentialMethod::series;
            else if (val == "monte-carlo")
                cfg.u_method = PotentialMethod::monte_carlo;
            else if (val == "auto")
                cfg.u_method_auto = true;
            else
                throw std::invalid_argument(
                    "config key 'u_method': must be auto, asymptotic, series or monte-carlo");
        } else if (key == "single_path") {
            cfg.opt.single_path = to_bool(key, val);
        } else if (key == "dump_replicas") {
            cfg.opt.dump_replicas = to_bool(key, val);
        } else if (key == "out") {
            cfg.out_dir = val;
        } else {
            throw std::invalid_argument("config key '" + key + "': unknown key");
        }
    }

    if (cfg.experiment.empty())
        throw std::invalid_argument("config key 'experiment': missing");
    if (have_inline_spec && have_spec_file)
        throw std::invalid_argument("config key 'spec_file': conflicts with inline spec.* keys");
    if (have_inline_spec)
        cfg.spec = parse_spec_kv(spec_kv);
    else if (!have_spec_file)
        throw std::invalid_argument("config key 'spec.family': missing (no spec given)");

    if (have_deltas) {
        if (cfg.delta_spec.kind == DeltaSpec::Kind::explicit_list) {
            auto d = cfg.delta_spec.list;
            std::sort(d.begin(), d.end(), std::greater<double>());
            for (double x : d)
                if (!(x > 0.0))
                    throw std::invalid_argument("config key 'deltas': levels must be > 0");
            cfg.opt.deltas = d;
        } else if (cfg.delta_spec.kind == DeltaSpec::Kind::log_spaced) {
            const auto& ds = cfg.delta_spec;
            if (!(ds.log_min > 0.0) || !(ds.log_max > ds.log_min) || ds.per_decade < 1)
                throw std::invalid_argument("config key 'delta_log': need 0 < min < max, per_decade >= 1");
            std::vector<double> d;
            const double step = std::pow(10.0, 1.0 / ds.per_decade);
            for (double x = ds.log_max; x > ds.log_min * (1.0 - 1e-12); x /= step)
                d.push_back(x);
            cfg.opt.deltas = d;
        }
        // geometric grids are resolved against the spec at run time
    }
    if (cfg.opt.replicas < 1)
        throw std::invalid_argument("config key 'replicas': must be >= 1");
    if (cfg.opt.workers < 1)
        throw std::invalid_argument("config key 'workers': must be >= 1");
    return cfg;
}

RunConfig read_config_file(const std::string& path) {
    std::string dir;
    const auto slash = path.find_last_of('/');
    if (slash != std::string::npos)
        dir = path.substr(0, slash);
    return parse_config_kv(read_kv_file(path), dir);
}

} // namespace subcover
