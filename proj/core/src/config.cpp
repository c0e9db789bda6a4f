#include "pjt/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

namespace pjt {

namespace {

std::string join(const std::vector<std::string> &items) {
    std::string out;
    for (const auto &s : items) {
        if (!out.empty()) out += "; ";
        out += s;
    }
    return out;
}

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_plain(const std::string &s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const char *first = s.data();
    const char *last = s.data() + s.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
    return v;
}

// "1.5", "pi", "pi/4", "3*pi", "3*pi/2", "-pi/4"
std::optional<double> parse_real(const std::string &raw) {
    const std::string s = trim(raw);
    if (auto v = parse_plain(s)) return v;
    const auto at = s.find("pi");
    if (at == std::string::npos) return std::nullopt;
    std::string head = trim(s.substr(0, at));
    std::string tail = trim(s.substr(at + 2));
    double factor = 1.0;
    if (head == "-") {
        factor = -1.0;
    } else if (!head.empty()) {
        if (head.back() != '*') return std::nullopt;
        auto f = parse_plain(trim(head.substr(0, head.size() - 1)));
        if (!f) return std::nullopt;
        factor = *f;
    }
    double divisor = 1.0;
    if (!tail.empty()) {
        if (tail.front() != '/') return std::nullopt;
        auto d = parse_plain(trim(tail.substr(1)));
        if (!d || *d == 0.0) return std::nullopt;
        divisor = *d;
    }
    return factor * std::numbers::pi / divisor;
}

std::optional<std::pair<double, double>> parse_pair(const std::string &s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) return std::nullopt;
    auto a = parse_real(s.substr(0, comma));
    auto b = parse_real(s.substr(comma + 1));
    if (!a || !b) return std::nullopt;
    return std::make_pair(*a, *b);
}

std::optional<long long> parse_integer(const std::string &raw) {
    const std::string s = trim(raw);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

struct Entry {
    std::string value;
    int line = 0;
};

using Table = std::map<std::string, std::map<std::string, Entry>>;

// Keys each section accepts, in canonical order.
const std::vector<std::pair<std::string, std::vector<std::string>>> &schema() {
    static const std::vector<std::pair<std::string, std::vector<std::string>>> s = {
        {"experiment", {"method", "epsilon", "q0_scaled", "p0", "t_final", "n_outputs", "mode", "seed", "output"}},
        {"hopping", {"n_particles", "weight_floor", "momentum", "threads", "tol", "event_tol", "q_floor"}},
        {"grid", {"half_width", "points", "dt", "dump"}},
        {"scattering", {"z", "s_max"}},
    };
    return s;
}

class Reader {
  public:
    explicit Reader(const Table &t) : table_(t) {}

    std::vector<std::string> errors;

    const Entry *find(const std::string &sec, const std::string &key, bool required) {
        const auto s = table_.find(sec);
        if (s != table_.end()) {
            const auto k = s->second.find(key);
            if (k != s->second.end()) return &k->second;
        }
        if (required) errors.push_back(sec + "." + key + ": missing required key");
        return nullptr;
    }

    void bad(const std::string &sec, const std::string &key, const Entry &e, const std::string &why) {
        errors.push_back(sec + "." + key + " (line " + std::to_string(e.line) + "): " + why + ", got '" + e.value + "'");
    }

    template <class Check>
    void real(const std::string &sec, const std::string &key, double &out, bool required, Check ok,
              const char *what) {
        const Entry *e = find(sec, key, required);
        if (!e) return;
        auto v = parse_real(e->value);
        if (!v) return bad(sec, key, *e, "expected a number");
        if (!ok(*v)) return bad(sec, key, *e, what);
        out = *v;
    }

    template <class Int, class Check>
    void integer(const std::string &sec, const std::string &key, Int &out, Check ok, const char *what) {
        const Entry *e = find(sec, key, false);
        if (!e) return;
        auto v = parse_integer(e->value);
        if (!v) return bad(sec, key, *e, "expected an integer");
        if (!ok(*v) || *v < static_cast<long long>(std::numeric_limits<Int>::min()) ||
            (*v > 0 && static_cast<unsigned long long>(*v) > std::numeric_limits<Int>::max())) {
            return bad(sec, key, *e, what);
        }
        out = static_cast<Int>(*v);
    }

    void pair(const std::string &sec, const std::string &key, Vec2 &out, bool required) {
        const Entry *e = find(sec, key, required);
        if (!e) return;
        auto v = parse_pair(e->value);
        if (!v) return bad(sec, key, *e, "expected 'x, y'");
        out = {v->first, v->second};
    }

    void text(const std::string &sec, const std::string &key, std::string &out) {
        if (const Entry *e = find(sec, key, false)) out = e->value;
    }

    template <class T>
    void choice(const std::string &sec, const std::string &key, T &out, bool required,
                const std::vector<std::pair<std::string, T>> &options) {
        const Entry *e = find(sec, key, required);
        if (!e) return;
        std::string names;
        for (const auto &[name, value] : options) {
            if (name == e->value) {
                out = value;
                return;
            }
            names += (names.empty() ? "" : ", ") + name;
        }
        bad(sec, key, *e, "expected one of " + names);
    }

  private:
    const Table &table_;
};

constexpr auto positive = [](double v) { return v > 0.0; };
constexpr auto non_negative = [](double v) { return v >= 0.0; };

Table tokenize(const std::string &text, std::vector<std::string> &errors) {
    Table table;
    std::map<std::string, std::set<std::string>> allowed;
    for (const auto &[sec, keys] : schema()) allowed[sec] = {keys.begin(), keys.end()};

    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        const std::string where = "line " + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') {
                errors.push_back(where + ": malformed section header '" + line + "'");
                section.clear();
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            if (!allowed.count(section)) errors.push_back(where + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back(where + ": expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        const auto hash = value.find(" #");
        if (hash != std::string::npos) value = trim(value.substr(0, hash));
        if (section.empty()) {
            errors.push_back(where + ": key '" + key + "' outside any section");
            continue;
        }
        if (!allowed.count(section)) continue;
        if (!allowed[section].count(key)) {
            errors.push_back(section + "." + key + " (" + where + "): unknown key");
            continue;
        }
        if (!table[section].emplace(key, Entry{value, line_no}).second) {
            errors.push_back(section + "." + key + " (" + where + "): duplicate key");
        }
    }
    return table;
}

} // namespace

SchemaError::SchemaError(std::vector<std::string> violations)
    : Error("invalid configuration: " + join(violations)), violations_(std::move(violations)) {}

const char *to_string(Method m) {
    switch (m) {
    case Method::Hopping: return "hopping";
    case Method::Grid: return "grid";
    case Method::Both: return "both";
    case Method::VerifyScattering: return "verify-scattering";
    case Method::Trajectory: return "trajectory";
    }
    return "?";
}

Vec2 ExperimentConfig::q0() const { return std::sqrt(epsilon) * q0_scaled; }

std::vector<double> ExperimentConfig::output_times() const {
    std::vector<double> t(static_cast<std::size_t>(n_outputs) + 1);
    for (int k = 0; k <= n_outputs; ++k) t[static_cast<std::size_t>(k)] = t_final * k / n_outputs;
    t.back() = t_final;
    return t;
}

HoppingConfig ExperimentConfig::hopping_config() const {
    HoppingConfig h;
    h.epsilon = epsilon;
    h.n_particles = hopping.n_particles;
    h.seed = seed;
    h.weight_floor = hopping.weight_floor;
    h.t_grid = output_times();
    h.q0 = q0();
    h.p0 = p0;
    h.initial_mode = mode;
    h.momentum = hopping.momentum;
    h.integrator = hopping.integrator;
    h.threads = hopping.threads;
    return h;
}

SplitStepConfig ExperimentConfig::grid_config() const {
    SplitStepConfig g;
    g.grid = {grid.half_width, grid.points};
    g.packet = {q0(), p0, epsilon, mode};
    g.dt = grid.dt;
    g.t_grid = output_times();
    if (!grid.dump.empty()) g.dump_path = grid.dump;
    return g;
}

ExperimentConfig parse_config(const std::string &text) {
    std::vector<std::string> errors;
    const Table table = tokenize(text, errors);
    Reader r(table);
    ExperimentConfig cfg;

    const std::string ex = "experiment";
    r.choice<Method>(ex, "method", cfg.method, true,
                     {{"hopping", Method::Hopping},
                      {"grid", Method::Grid},
                      {"both", Method::Both},
                      {"verify-scattering", Method::VerifyScattering},
                      {"trajectory", Method::Trajectory}});
    r.real(ex, "epsilon", cfg.epsilon, true, positive, "must be > 0");
    r.pair(ex, "q0_scaled", cfg.q0_scaled, true);
    r.pair(ex, "p0", cfg.p0, true);
    r.real(ex, "t_final", cfg.t_final, true, positive, "must be > 0");
    r.integer(ex, "n_outputs", cfg.n_outputs, [](long long v) { return v >= 1; }, "must be >= 1");
    r.choice<Mode>(ex, "mode", cfg.mode, false, {{"plus", Mode::Plus}, {"minus", Mode::Minus}, {"zero", Mode::Zero}});
    r.integer(ex, "seed", cfg.seed, [](long long v) { return v >= 0; }, "must be >= 0");
    r.text(ex, "output", cfg.output);

    const std::string hp = "hopping";
    r.integer(hp, "n_particles", cfg.hopping.n_particles, [](long long v) { return v >= 1; }, "must be >= 1");
    r.real(hp, "weight_floor", cfg.hopping.weight_floor, false, non_negative, "must be >= 0");
    r.choice<HopMomentum>(hp, "momentum", cfg.hopping.momentum, false,
                          {{"gap", HopMomentum::Gap}, {"local", HopMomentum::Local}});
    r.integer(hp, "threads", cfg.hopping.threads, [](long long v) { return v >= 0; }, "must be >= 0");
    r.real(hp, "tol", cfg.hopping.integrator.tol, false, positive, "must be > 0");
    r.real(hp, "event_tol", cfg.hopping.integrator.event_tol, false, positive, "must be > 0");
    r.real(hp, "q_floor", cfg.hopping.integrator.q_floor, false, positive, "must be > 0");

    const std::string gr = "grid";
    r.real(gr, "half_width", cfg.grid.half_width, false, positive, "must be > 0");
    r.integer(gr, "points", cfg.grid.points,
              [](long long v) { return v >= 2 && v <= (1 << 16) && (v & (v - 1)) == 0; },
              "must be a power of two >= 2");
    r.real(gr, "dt", cfg.grid.dt, false, positive, "must be > 0");
    r.text(gr, "dump", cfg.grid.dump);

    const std::string sc = "scattering";
    Vec2 z{cfg.scattering.z.real(), cfg.scattering.z.imag()};
    r.pair(sc, "z", z, false);
    cfg.scattering.z = {z.x, z.y};
    r.real(sc, "s_max", cfg.scattering.s_max, false, positive, "must be > 0");

    errors.insert(errors.end(), r.errors.begin(), r.errors.end());
    if (!errors.empty()) throw SchemaError(std::move(errors));
    return cfg;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string serialize(const ExperimentConfig &cfg) {
    auto pair = [](double a, double b) { return format_real(a) + ", " + format_real(b); };
    const char *momentum = cfg.hopping.momentum == HopMomentum::Gap ? "gap" : "local";
    std::ostringstream o;
    o << "[experiment]\n"
      << "method = " << to_string(cfg.method) << "\n"
      << "epsilon = " << format_real(cfg.epsilon) << "\n"
      << "q0_scaled = " << pair(cfg.q0_scaled.x, cfg.q0_scaled.y) << "\n"
      << "p0 = " << pair(cfg.p0.x, cfg.p0.y) << "\n"
      << "t_final = " << format_real(cfg.t_final) << "\n"
      << "n_outputs = " << cfg.n_outputs << "\n"
      << "mode = " << to_string(cfg.mode) << "\n"
      << "seed = " << cfg.seed << "\n";
    if (!cfg.output.empty()) o << "output = " << cfg.output << "\n";
    o << "\n[hopping]\n"
      << "n_particles = " << cfg.hopping.n_particles << "\n"
      << "weight_floor = " << format_real(cfg.hopping.weight_floor) << "\n"
      << "momentum = " << momentum << "\n"
      << "threads = " << cfg.hopping.threads << "\n"
      << "tol = " << format_real(cfg.hopping.integrator.tol) << "\n"
      << "event_tol = " << format_real(cfg.hopping.integrator.event_tol) << "\n"
      << "q_floor = " << format_real(cfg.hopping.integrator.q_floor) << "\n"
      << "\n[grid]\n"
      << "half_width = " << format_real(cfg.grid.half_width) << "\n"
      << "points = " << cfg.grid.points << "\n"
      << "dt = " << format_real(cfg.grid.dt) << "\n";
    if (!cfg.grid.dump.empty()) o << "dump = " << cfg.grid.dump << "\n";
    o << "\n[scattering]\n"
      << "z = " << pair(cfg.scattering.z.real(), cfg.scattering.z.imag()) << "\n"
      << "s_max = " << format_real(cfg.scattering.s_max) << "\n";
    return o.str();
}

} // namespace pjt
