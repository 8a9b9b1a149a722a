#include "reachquant/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "reachquant/errors.hpp"

namespace reachquant {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_items(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// One raw `key = value` binding with its source line for error reporting.
struct Binding {
  std::string value;
  int line = 0;
  bool used = false;
};

class Parser {
 public:
  Parser(std::string_view text, std::string name) : name_(std::move(name)) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t eol = text.find('\n', pos);
      std::string_view line =
          text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
      pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
      ++line_no;

      if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
        line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;

      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) fail("expected `key = value`", line_no);
      const std::string key{trim(line.substr(0, eq))};
      const std::string value{trim(line.substr(eq + 1))};
      if (key.empty()) fail("missing key before `=`", line_no);
      if (value.empty()) fail("missing value for key `" + key + "`", line_no);
      if (bindings_.count(key)) fail("duplicate key `" + key + "`", line_no);
      bindings_[key] = Binding{value, line_no, false};
    }
  }

  [[noreturn]] void fail(const std::string& msg, int line = 0) const {
    throw ConfigError(msg, name_, line);
  }

  bool has(const std::string& key) const { return bindings_.count(key) != 0; }

  const Binding& get(const std::string& key) {
    auto it = bindings_.find(key);
    if (it == bindings_.end()) fail("missing required key `" + key + "`");
    it->second.used = true;
    return it->second;
  }

  void check_all_used() const {
    for (const auto& [key, b] : bindings_)
      if (!b.used) fail("unknown key `" + key + "`", b.line);
  }

  double number(const std::string& key) {
    const Binding& b = get(key);
    return parse_double(b.value, key, b.line);
  }

  int integer(const std::string& key) {
    const Binding& b = get(key);
    const double v = parse_double(b.value, key, b.line);
    const double r = std::round(v);
    if (std::abs(v - r) > 0.0 || std::abs(r) > 2147483647.0)
      fail("key `" + key + "` must be an integer", b.line);
    return static_cast<int>(r);
  }

  std::string token(const std::string& key) { return get(key).value; }

  Mat matrix(const std::string& key) {
    const Binding& b = get(key);
    return parse_matrix(b.value, key, b.line);
  }

  Vec vector(const std::string& key) {
    const Binding& b = get(key);
    const Mat m = parse_matrix(b.value, key, b.line);
    if (m.rows() != 1) fail("key `" + key + "` must be a single bracketed row", b.line);
    Vec out(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] = m(0, j);
    return out;
  }

  std::vector<double> number_list(const std::string& key) {
    const Binding& b = get(key);
    std::vector<double> out;
    for (const auto& item : split_items(b.value)) out.push_back(parse_double(item, key, b.line));
    if (out.empty()) fail("key `" + key + "` needs at least one value", b.line);
    return out;
  }

  std::vector<std::uint64_t> u64_list(const std::string& key) {
    const Binding& b = get(key);
    std::vector<std::uint64_t> out;
    for (const auto& item : split_items(b.value)) {
      char* end = nullptr;
      errno = 0;
      const unsigned long long v = std::strtoull(item.c_str(), &end, 10);
      if (errno != 0 || end != item.c_str() + item.size() || item.empty() || item[0] == '-')
        fail("key `" + key + "`: `" + item + "` is not an unsigned integer", b.line);
      out.push_back(v);
    }
    if (out.empty()) fail("key `" + key + "` needs at least one value", b.line);
    return out;
  }

  double parse_double(const std::string& text, const std::string& key, int line) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text.empty() || !std::isfinite(v))
      fail("key `" + key + "`: `" + text + "` is not a number", line);
    return v;
  }

  Mat parse_matrix(const std::string& text, const std::string& key, int line) {
    const std::string_view t = trim(text);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']')
      fail("key `" + key + "` must be bracketed, e.g. [1 0; 0 1]", line);
    const std::string_view body = t.substr(1, t.size() - 2);

    std::vector<std::vector<double>> rows;
    std::size_t pos = 0;
    while (pos <= body.size()) {
      const std::size_t semi = body.find(';', pos);
      const std::string_view row_text =
          body.substr(pos, semi == std::string_view::npos ? std::string_view::npos : semi - pos);
      pos = semi == std::string_view::npos ? body.size() + 1 : semi + 1;
      std::vector<double> row;
      for (const auto& item : split_items(row_text)) row.push_back(parse_double(item, key, line));
      if (row.empty()) fail("key `" + key + "`: empty matrix row", line);
      if (!rows.empty() && row.size() != rows.front().size())
        fail("key `" + key + "`: ragged matrix rows", line);
      rows.push_back(std::move(row));
    }

    Mat m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < rows.front().size(); ++j) m(i, j) = rows[i][j];
    return m;
  }

  // name(arg, ...) or a bare name; returns the args, empty when bare.
  std::vector<double> call_args(const Binding& b, const std::string& key, std::string* head) {
    const std::string& v = b.value;
    const std::size_t open = v.find('(');
    if (open == std::string::npos) {
      *head = std::string(trim(v));
      return {};
    }
    if (v.back() != ')') fail("key `" + key + "`: missing `)`", b.line);
    *head = std::string(trim(std::string_view(v).substr(0, open)));
    std::vector<double> args;
    for (const auto& item : split_items(std::string_view(v).substr(open + 1, v.size() - open - 2)))
      args.push_back(parse_double(item, key, b.line));
    return args;
  }

  // `table [...]` payload: rows of (time, values...).
  std::vector<std::pair<double, Vec>> table_rows(const Binding& b, const std::string& key) {
    const std::string_view v = trim(b.value);
    constexpr std::string_view kw = "table";
    const Mat m = parse_matrix(std::string(v.substr(kw.size())), key, b.line);
    if (m.cols() < 2) fail("key `" + key + "`: table rows need a time and a value", b.line);
    std::vector<std::pair<double, Vec>> rows;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      Vec val(m.cols() - 1);
      for (std::size_t j = 1; j < m.cols(); ++j) val[j - 1] = m(i, j);
      if (!rows.empty() && m(i, 0) <= rows.back().first)
        fail("key `" + key + "`: table times must be strictly increasing", b.line);
      rows.emplace_back(m(i, 0), std::move(val));
    }
    return rows;
  }

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
  std::map<std::string, Binding> bindings_;
};

SignalSpec parse_signals(Parser& p) {
  SignalSpec s;
  if (p.has("input")) {
    const Binding& b = p.get("input");
    if (trim(b.value).substr(0, 5) == "table") {
      s.input = SignalSpec::Input::Table;
      s.input_table = p.table_rows(b, "input");
    } else {
      std::string head;
      const std::vector<double> args = p.call_args(b, "input", &head);
      if (head == "zero" && args.empty()) {
        s.input = SignalSpec::Input::Zero;
      } else if (head == "sin" && args.size() >= 2 && args.size() <= 3) {
        s.input = SignalSpec::Input::Sinusoid;
        s.amplitude = args[0];
        s.angular_freq = args[1];
        s.phase = args.size() == 3 ? args[2] : 0.0;
      } else {
        p.fail("key `input` must be zero, sin(amplitude, angular_freq[, phase]) or table [...]",
               b.line);
      }
    }
  }
  if (p.has("disturbance")) {
    const Binding& b = p.get("disturbance");
    if (trim(b.value).substr(0, 5) == "table") {
      s.disturbance = SignalSpec::Disturbance::Table;
      s.dist_table = p.table_rows(b, "disturbance");
    } else {
      std::string head;
      const std::vector<double> args = p.call_args(b, "disturbance", &head);
      if (head == "zero" && args.empty()) {
        s.disturbance = SignalSpec::Disturbance::Zero;
      } else if (head == "uniform" && args.size() >= 1 && args.size() <= 2) {
        s.disturbance = SignalSpec::Disturbance::SeededUniform;
        s.dist_bound = args[0];
        s.dist_hold = args.size() == 2 ? args[1] : 0.0;
      } else {
        p.fail("key `disturbance` must be zero, uniform(bound[, hold]) or table [...]", b.line);
      }
    }
  }
  return s;
}

bool on_grid(double span, double dt) {
  const double ratio = span / dt;
  const double r = std::round(ratio);
  return r >= 1.0 && std::abs(ratio - r) <= 1e-9;
}

}  // namespace

void ExperimentConfig::validate() const {
  const auto fail = [](const std::string& msg) { throw ConfigError(msg); };

  try {
    plant.validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  const std::size_t n = plant.state_dim();

  if (cert.P.rows() != n || cert.P.cols() != n) fail("P must be n x n");
  if (cert.Q.rows() != n || cert.Q.cols() != plant.output_dim())
    fail("Q must be n x n_y");
  if (!(cert.nu1 > 0.0) || !(cert.nu2 > 0.0)) fail("nu1 and nu2 must be positive");

  if (bounds.x_c.size() != n) fail("x_c must have one entry per state");
  if (!(bounds.x_b > 0.0)) fail("x_b must be positive");
  if (bounds.u_b < 0.0 || bounds.d_b < 0.0) fail("u_b and d_b must be nonnegative");

  if (!x0.empty()) {
    if (x0.size() != n) fail("x0 must have one entry per state");
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(x0[i] - bounds.x_c[i]) > bounds.x_b + 1e-9)
        fail("x0 lies outside the initial-state box B(x_c, x_b)");
  }

  if (quantizer.levels < 2) fail("N must be at least 2");
  if (quantizer.dim != n) fail("quantizer dimension must equal the state dimension");

  if (!(T > 0.0) || !(dt > 0.0) || !(horizon > 0.0)) fail("T, dt and horizon must be positive");
  if (!on_grid(T, dt)) fail("T must be a positive multiple of dt");
  if (!on_grid(horizon, dt)) fail("horizon must be a positive multiple of dt");
  if (T > horizon + 1e-12) fail("horizon must cover at least one transmission interval");

  const bool scheme_ok =
      schemes == std::vector<SchemeKind>{SchemeKind::SetBased} ||
      schemes == std::vector<SchemeKind>{SchemeKind::NormBased} ||
      schemes == std::vector<SchemeKind>{SchemeKind::SetBased, SchemeKind::NormBased};
  if (!scheme_ok) fail("scheme must be set, norm or both");

  if (seeds.empty()) fail("at least one seed is required");
  if (out_dir.empty()) fail("out_dir must not be empty");

  if (signals.input == SignalSpec::Input::Table) {
    for (const auto& [t0, v] : signals.input_table)
      if (v.size() != plant.input_dim()) fail("input table rows must have one value per input");
  }
  if (signals.disturbance == SignalSpec::Disturbance::Table) {
    for (const auto& [t0, v] : signals.dist_table)
      if (v.size() != plant.dist_dim())
        fail("disturbance table rows must have one value per disturbance channel");
  }
  if (signals.disturbance == SignalSpec::Disturbance::SeededUniform) {
    if (signals.dist_bound < 0.0) fail("disturbance bound must be nonnegative");
    if (signals.dist_hold < 0.0) fail("disturbance hold must be nonnegative");
    if (signals.dist_hold > 0.0 && !on_grid(signals.dist_hold, dt))
      fail("disturbance hold must be a multiple of dt");
  }

  for (double tv : sweep_T)
    if (!(tv > 0.0)) fail("sweep_T entries must be positive");
  for (int nv : sweep_N)
    if (nv < 2) fail("sweep_N entries must be at least 2");
}

ExperimentConfig ExperimentConfig::parse_string(std::string_view text, const std::string& name) {
  Parser p(text, name);
  ExperimentConfig cfg;

  cfg.plant.A = p.matrix("A");
  cfg.plant.B = p.matrix("B");
  cfg.plant.E = p.matrix("E");
  cfg.plant.H = p.matrix("H");
  cfg.cert.P = p.matrix("P");
  cfg.cert.Q = p.matrix("Q");
  cfg.cert.nu1 = p.number("nu1");
  cfg.cert.nu2 = p.number("nu2");

  cfg.bounds.x_c = p.vector("x_c");
  cfg.bounds.x_b = p.number("x_b");
  cfg.bounds.u_b = p.number("u_b");
  cfg.bounds.d_b = p.number("d_b");
  if (p.has("x0")) cfg.x0 = p.vector("x0");

  if (p.has("N") == p.has("bits")) p.fail("exactly one of `N` and `bits` is required");
  try {
    if (p.has("N"))
      cfg.quantizer = QuantizerConfig::from_levels(p.integer("N"), cfg.plant.state_dim());
    else
      cfg.quantizer = QuantizerConfig::from_bits(p.integer("bits"), cfg.plant.state_dim());
  } catch (const std::invalid_argument& e) {
    p.fail(e.what());
  }

  cfg.T = p.number("T");
  cfg.horizon = p.number("horizon");
  if (p.has("dt")) cfg.dt = p.number("dt");

  const std::string scheme = p.token("scheme");
  if (scheme == "set")
    cfg.schemes = {SchemeKind::SetBased};
  else if (scheme == "norm")
    cfg.schemes = {SchemeKind::NormBased};
  else if (scheme == "both")
    cfg.schemes = {SchemeKind::SetBased, SchemeKind::NormBased};
  else
    p.fail("key `scheme` must be set, norm or both", p.get("scheme").line);

  cfg.signals = parse_signals(p);

  cfg.seeds = p.has("seeds") ? p.u64_list("seeds") : std::vector<std::uint64_t>{1};
  if (p.has("out_dir")) cfg.out_dir = p.token("out_dir");

  if (p.has("growth")) {
    const Binding& b = p.get("growth");
    if (b.value == "integral")
      cfg.growth = GrowthBound::Integral;
    else if (b.value == "exponential")
      cfg.growth = GrowthBound::Exponential;
    else
      p.fail("key `growth` must be integral or exponential", b.line);
  }
  if (p.has("decoder")) {
    const Binding& b = p.get("decoder");
    if (b.value == "full")
      cfg.decoder = DecoderRange::Full;
    else if (b.value == "half")
      cfg.decoder = DecoderRange::Half;
    else
      p.fail("key `decoder` must be full or half", b.line);
  }

  if (p.has("sweep_T")) cfg.sweep_T = p.number_list("sweep_T");
  if (p.has("sweep_N")) {
    for (double v : p.number_list("sweep_N")) {
      if (v != std::round(v)) p.fail("key `sweep_N` must list integers");
      cfg.sweep_N.push_back(static_cast<int>(v));
    }
  }

  p.check_all_used();

  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(e.what(), name);
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

std::string ExperimentConfig::emit() const {
  const auto mat = [](const Mat& m) {
    std::string out = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i) out += "; ";
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (j) out += " ";
        out += fmt(m(i, j));
      }
    }
    return out + "]";
  };
  const auto vec = [&](const Vec& v) {
    Mat m(1, v.size());
    for (std::size_t j = 0; j < v.size(); ++j) m(0, j) = v[j];
    return mat(m);
  };

  std::string out;
  out += "A = " + mat(plant.A) + "\n";
  out += "B = " + mat(plant.B) + "\n";
  out += "E = " + mat(plant.E) + "\n";
  out += "H = " + mat(plant.H) + "\n";
  out += "P = " + mat(cert.P) + "\n";
  out += "Q = " + mat(cert.Q) + "\n";
  out += "nu1 = " + fmt(cert.nu1) + "\n";
  out += "nu2 = " + fmt(cert.nu2) + "\n";
  out += "x_c = " + vec(bounds.x_c) + "\n";
  out += "x_b = " + fmt(bounds.x_b) + "\n";
  out += "u_b = " + fmt(bounds.u_b) + "\n";
  out += "d_b = " + fmt(bounds.d_b) + "\n";
  if (!x0.empty()) out += "x0 = " + vec(x0) + "\n";
  out += "N = " + std::to_string(quantizer.levels) + "\n";
  out += "T = " + fmt(T) + "\n";
  out += "dt = " + fmt(dt) + "\n";
  out += "horizon = " + fmt(horizon) + "\n";
  out += "scheme = ";
  out += schemes.size() == 2 ? "both" : scheme_name(schemes.front());
  out += "\n";

  out += "input = ";
  switch (signals.input) {
    case SignalSpec::Input::Zero:
      out += "zero";
      break;
    case SignalSpec::Input::Sinusoid:
      out += "sin(" + fmt(signals.amplitude) + ", " + fmt(signals.angular_freq) + ", " +
             fmt(signals.phase) + ")";
      break;
    case SignalSpec::Input::Table: {
      out += "table [";
      for (std::size_t i = 0; i < signals.input_table.size(); ++i) {
        if (i) out += "; ";
        out += fmt(signals.input_table[i].first);
        for (double v : signals.input_table[i].second) out += " " + fmt(v);
      }
      out += "]";
      break;
    }
  }
  out += "\n";

  out += "disturbance = ";
  switch (signals.disturbance) {
    case SignalSpec::Disturbance::Zero:
      out += "zero";
      break;
    case SignalSpec::Disturbance::SeededUniform:
      out += "uniform(" + fmt(signals.dist_bound) + ", " + fmt(signals.dist_hold) + ")";
      break;
    case SignalSpec::Disturbance::Table: {
      out += "table [";
      for (std::size_t i = 0; i < signals.dist_table.size(); ++i) {
        if (i) out += "; ";
        out += fmt(signals.dist_table[i].first);
        for (double v : signals.dist_table[i].second) out += " " + fmt(v);
      }
      out += "]";
      break;
    }
  }
  out += "\n";

  out += "seeds =";
  for (std::uint64_t s : seeds) out += " " + std::to_string(s);
  out += "\n";
  out += "out_dir = " + out_dir + "\n";
  out += "growth = ";
  out += growth == GrowthBound::Integral ? "integral" : "exponential";
  out += "\n";
  out += "decoder = ";
  out += decoder == DecoderRange::Full ? "full" : "half";
  out += "\n";
  if (!sweep_T.empty()) {
    out += "sweep_T =";
    for (double v : sweep_T) out += " " + fmt(v);
    out += "\n";
  }
  if (!sweep_N.empty()) {
    out += "sweep_N =";
    for (int v : sweep_N) out += " " + std::to_string(v);
    out += "\n";
  }
  return out;
}

}  // namespace reachquant
