#include "altspin/config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "altspin/error.hpp"

namespace altspin {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (const char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

struct PendingAxis {
  std::string name;
  std::optional<double> min, max, step;
  std::optional<std::string> values;
  int line = 0;
};

AxisSpec finish_axis(const PendingAxis& a, const std::string& origin) {
  const std::string where = origin + ": [axis." + a.name + "]";
  AxisSpec out;
  out.name = a.name;
  if (a.values) {
    if (a.min || a.max || a.step) throw_config(where + " mixes 'values' with min/max/step");
    out.values = parse_real_list(*a.values, where + " values");
    if (out.values.empty()) throw_config(where + " has an empty value list");
    out.source = "values = " + *a.values;
    return out;
  }
  if (!a.min || !a.max) throw_config(where + " needs min and max (or values)");
  const double step = a.step.value_or(0.0);
  if (!a.step) {
    if (*a.min != *a.max) throw_config(where + " needs step");
  } else if (!(step > 0.0)) {
    throw_config(where + " step must be positive");
  }
  if (*a.max < *a.min) throw_config(where + " has max < min");
  out.values = a.step ? axis_range(*a.min, *a.max, step) : std::vector<double>{*a.min};
  out.source = "min = " + format_real(*a.min) + ", max = " + format_real(*a.max) +
               (a.step ? ", step = " + format_real(step) : std::string());
  return out;
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

double parse_real(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t.empty()) throw_config(what + ": expected a number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
    throw_config(what + ": not a finite number: '" + t + "'");
  }
  return v;
}

long long parse_integer(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
    throw_config(what + ": not an integer: '" + t + "'");
  }
  return v;
}

std::vector<double> parse_real_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(item, what));
  return out;
}

std::vector<double> axis_range(double min, double max, double step) {
  if (!(step > 0.0)) throw_config("axis step must be positive");
  const double span = (max - min) / step;
  const auto count = static_cast<long long>(std::floor(span + 1e-9)) + 1;
  if (count > 10'000'000) throw_config("axis has too many points");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) {
    // Round to 12 significant digits so 0.05 * 7 prints and compares as 0.35.
    out.push_back(parse_real(format_real(min + static_cast<double>(i) * step), "axis"));
  }
  return out;
}

const AxisSpec* ScanConfig::axis(const std::string& name) const {
  for (const auto& a : axes) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

std::size_t ScanConfig::grid_size() const {
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.values.size();
  return total;
}

ScanConfig parse_config(const std::string& text, const std::string& origin) {
  ScanConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::string section;  // "", "fixed", "options" or "axis"
  std::vector<PendingAxis> pending;
  std::map<std::string, bool> seen_top;

  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no);

    if (line.front() == '[') {
      if (line.back() != ']') throw_config(where + ": malformed section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name == "fixed" || name == "options") {
        section = name;
      } else if (name.rfind("axis.", 0) == 0) {
        const std::string axis = name.substr(5);
        if (!valid_name(axis)) throw_config(where + ": bad axis name '" + axis + "'");
        for (const auto& p : pending) {
          if (p.name == axis) throw_config(where + ": axis '" + axis + "' declared twice");
        }
        pending.push_back({axis, {}, {}, {}, {}, line_no});
        section = "axis";
      } else {
        throw_config(where + ": unknown section [" + name + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw_config(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_name(key)) throw_config(where + ": bad key '" + key + "'");
    if (value.empty()) throw_config(where + ": empty value for '" + key + "'");

    if (section.empty()) {
      if (seen_top[key]) throw_config(where + ": duplicate key '" + key + "'");
      seen_top[key] = true;
      if (key == "experiment") {
        cfg.experiment = value;
      } else if (key == "n") {
        cfg.n = static_cast<int>(parse_integer(value, where + " n"));
      } else if (key == "seed") {
        const auto s = parse_integer(value, where + " seed");
        if (s < 0) throw_config(where + ": seed must be non-negative");
        cfg.seed = static_cast<std::uint64_t>(s);
      } else if (key == "workers") {
        cfg.workers = static_cast<int>(parse_integer(value, where + " workers"));
        if (cfg.workers < 1) throw_config(where + ": workers must be >= 1");
      } else if (key == "output") {
        cfg.output = value;
      } else {
        throw_config(where + ": unknown key '" + key + "'");
      }
    } else if (section == "axis") {
      auto& a = pending.back();
      auto set = [&](std::optional<double>& slot) {
        if (slot) throw_config(where + ": duplicate key '" + key + "'");
        slot = parse_real(value, where + " " + key);
      };
      if (key == "min") {
        set(a.min);
      } else if (key == "max") {
        set(a.max);
      } else if (key == "step") {
        set(a.step);
      } else if (key == "values") {
        if (a.values) throw_config(where + ": duplicate key 'values'");
        a.values = value;
      } else {
        throw_config(where + ": unknown axis key '" + key + "'");
      }
    } else {
      auto& map = section == "fixed" ? cfg.fixed : cfg.options;
      if (!map.emplace(key, value).second) throw_config(where + ": duplicate key '" + key + "'");
    }
  }

  for (const auto& p : pending) cfg.axes.push_back(finish_axis(p, origin));
  return cfg;
}

ScanConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string to_text(const ScanConfig& cfg, bool runtime_keys) {
  std::ostringstream out;
  out << "experiment = " << cfg.experiment << "\n";
  out << "n = " << cfg.n << "\n";
  out << "seed = " << cfg.seed << "\n";
  if (runtime_keys) {
    out << "workers = " << cfg.workers << "\n";
    if (!cfg.output.empty()) out << "output = " << cfg.output << "\n";
  }
  if (!cfg.fixed.empty()) {
    out << "[fixed]\n";
    for (const auto& [k, v] : cfg.fixed) out << k << " = " << v << "\n";
  }
  if (!cfg.options.empty()) {
    out << "[options]\n";
    for (const auto& [k, v] : cfg.options) out << k << " = " << v << "\n";
  }
  for (const auto& a : cfg.axes) {
    out << "[axis." << a.name << "]\n";
    std::string src = a.source;
    for (std::size_t pos; (pos = src.find(", ")) != std::string::npos && src.rfind("values", 0) != 0;) {
      src.replace(pos, 2, "\n");
    }
    out << src << "\n";
  }
  return out.str();
}

}  // namespace altspin
