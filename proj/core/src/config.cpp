#include "lvdelay/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lvd {

namespace {

using json = nlohmann::ordered_json;

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw SpecError(key + " must be a number");
  return j.get<double>();
}

VectorXd get_vector(const json& doc, const std::string& key, int n) {
  if (!doc.contains(key)) throw SpecError("missing key: " + key);
  const json& arr = doc.at(key);
  if (!arr.is_array() || static_cast<int>(arr.size()) != n)
    throw SpecError(key + " must be an array of length " + std::to_string(n));
  VectorXd v(n);
  for (int i = 0; i < n; ++i)
    v[i] = get_number(arr[i], key + "[" + std::to_string(i + 1) + "]");
  return v;
}

std::vector<double> get_double_list(const json& j, const std::string& key) {
  if (!j.is_array()) throw SpecError(key + " must be an array");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k)
    out.push_back(get_number(j[k], key + "[" + std::to_string(k + 1) + "]"));
  return out;
}

Kernel parse_kernel(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains("kind"))
    throw SpecError(key + " must be an object with a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "dirac") {
      return Kernel::dirac(j.value("tau", 0.0));
    } else if (kind == "gamma") {
      if (!j.contains("m") || !j.contains("gamma"))
        throw SpecError(key + ": gamma kernel needs \"m\" and \"gamma\"");
      return Kernel::gamma(j.at("m").get<int>(), j.at("gamma").get<double>());
    } else if (kind == "table") {
      if (!j.contains("nodes") || !j.contains("weights"))
        throw SpecError(key + ": table kernel needs \"nodes\" and \"weights\"");
      return Kernel::table(get_double_list(j.at("nodes"), key + ".nodes"),
                           get_double_list(j.at("weights"), key + ".weights"));
    }
  } catch (const SpecError& e) {
    throw SpecError(key + ": " + e.what());
  }
  throw SpecError(key + ": unknown kernel kind \"" + kind + "\"");
}

HistorySpec::Entry parse_history_entry(const json& j, const std::string& key) {
  HistorySpec::Entry en;
  if (!j.is_object() || !j.contains("kind"))
    throw SpecError(key + " must be an object with a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    if (!j.contains("value")) throw SpecError(key + ": constant history needs \"value\"");
    en.is_constant = true;
    en.value = j.at("value").get<double>();
  } else if (kind == "table") {
    en.is_constant = false;
    if (!j.contains("times") || !j.contains("values"))
      throw SpecError(key + ": table history needs \"times\" and \"values\"");
    en.times = get_double_list(j.at("times"), key + ".times");
    en.values = get_double_list(j.at("values"), key + ".values");
  } else {
    throw SpecError(key + ": unknown history kind \"" + kind + "\"");
  }
  return en;
}

json kernel_to_json(const Kernel& k) {
  json j;
  switch (k.kind()) {
    case Kernel::Kind::dirac:
      j["kind"] = "dirac";
      j["tau"] = k.tau();
      break;
    case Kernel::Kind::gamma:
      j["kind"] = "gamma";
      j["m"] = k.order();
      j["gamma"] = k.rate();
      break;
    case Kernel::Kind::table:
      j["kind"] = "table";
      j["nodes"] = k.nodes();
      j["weights"] = k.weights();
      break;
  }
  return j;
}

json history_entry_to_json(const HistorySpec::Entry& en) {
  json j;
  if (en.is_constant) {
    j["kind"] = "constant";
    j["value"] = en.value;
  } else {
    j["kind"] = "table";
    j["times"] = en.times;
    j["values"] = en.values;
  }
  return j;
}

}  // namespace

LoadedSpec load_spec(const std::string& config_text) {
  json doc;
  try {
    doc = json::parse(config_text);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("configuration is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SpecError("top-level document must be an object");
  if (!doc.contains("n")) throw SpecError("missing key: n");
  if (!doc.at("n").is_number_integer() || doc.at("n").get<int>() <= 0)
    throw SpecError("n must be a positive integer");

  SystemSpec s;
  s.n = doc.at("n").get<int>();
  const int n = s.n;
  s.b = get_vector(doc, "b", n);
  s.mu = get_vector(doc, "mu", n);
  s.c = get_vector(doc, "c", n);
  s.d = get_vector(doc, "d", n);
  s.e = get_vector(doc, "e", n);

  if (!doc.contains("a")) throw SpecError("missing key: a");
  const json& arows = doc.at("a");
  if (!arows.is_array() || static_cast<int>(arows.size()) != n)
    throw SpecError("a must be an n x n array of rows");
  s.a.resize(n, n);
  for (int i = 0; i < n; ++i) {
    const std::string rk = "a[" + std::to_string(i + 1) + "]";
    if (!arows[i].is_array() || static_cast<int>(arows[i].size()) != n)
      throw SpecError(rk + " must have n entries");
    for (int j = 0; j < n; ++j)
      s.a(i, j) = get_number(arows[i][j], rk + "[" + std::to_string(j + 1) + "]");
  }

  if (!doc.contains("kernels")) throw SpecError("missing key: kernels");
  const json& kern = doc.at("kernels");
  if (!kern.contains("K")) throw SpecError("missing key: kernels.K");
  if (!kern.contains("G")) throw SpecError("missing key: kernels.G");
  const json& kk = kern.at("K");
  const json& kg = kern.at("G");
  if (!kk.is_array() || static_cast<int>(kk.size()) != n)
    throw SpecError("kernels.K must have n rows");
  if (!kg.is_array() || static_cast<int>(kg.size()) != n)
    throw SpecError("kernels.G must have n entries");
  for (int i = 0; i < n; ++i) {
    const std::string rk = "kernels.K[" + std::to_string(i + 1) + "]";
    if (!kk[i].is_array() || static_cast<int>(kk[i].size()) != n)
      throw SpecError(rk + " must have n entries");
    std::vector<Kernel> row;
    for (int j = 0; j < n; ++j)
      row.push_back(parse_kernel(kk[i][j], rk + "[" + std::to_string(j + 1) + "]"));
    s.K.push_back(std::move(row));
    s.G.push_back(parse_kernel(kg[i], "kernels.G[" + std::to_string(i + 1) + "]"));
  }

  s.validate();

  LoadedSpec out;
  out.spec = std::move(s);
  if (doc.contains("history")) {
    const json& h = doc.at("history");
    if (!h.contains("x") || !h.contains("u"))
      throw SpecError("history must contain \"x\" and \"u\"");
    HistorySpec hist;
    const json& hx = h.at("x");
    const json& hu = h.at("u");
    if (!hx.is_array() || static_cast<int>(hx.size()) != n)
      throw SpecError("history.x must have n entries");
    if (!hu.is_array() || static_cast<int>(hu.size()) != n)
      throw SpecError("history.u must have n entries");
    for (int i = 0; i < n; ++i) {
      hist.x.push_back(parse_history_entry(hx[i], "history.x[" + std::to_string(i + 1) + "]"));
      hist.u.push_back(parse_history_entry(hu[i], "history.u[" + std::to_string(i + 1) + "]"));
    }
    hist.validate(n);
    out.history = std::move(hist);
  }
  return out;
}

LoadedSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_spec(ss.str());
}

std::string save_spec(const SystemSpec& spec, const HistorySpec* history) {
  json doc;
  doc["n"] = spec.n;
  auto vec = [](const VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  doc["b"] = vec(spec.b);
  doc["mu"] = vec(spec.mu);
  json arows = json::array();
  for (int i = 0; i < spec.n; ++i) {
    json row = json::array();
    for (int j = 0; j < spec.n; ++j) row.push_back(spec.a(i, j));
    arows.push_back(row);
  }
  doc["a"] = arows;
  doc["c"] = vec(spec.c);
  doc["d"] = vec(spec.d);
  doc["e"] = vec(spec.e);
  json kk = json::array();
  json kg = json::array();
  for (int i = 0; i < spec.n; ++i) {
    json row = json::array();
    for (int j = 0; j < spec.n; ++j) row.push_back(kernel_to_json(spec.K[i][j]));
    kk.push_back(row);
    kg.push_back(kernel_to_json(spec.G[i]));
  }
  doc["kernels"] = json{{"K", kk}, {"G", kg}};
  if (history) {
    json hx = json::array();
    json hu = json::array();
    for (std::size_t i = 0; i < history->x.size(); ++i) {
      hx.push_back(history_entry_to_json(history->x[i]));
      hu.push_back(history_entry_to_json(history->u[i]));
    }
    doc["history"] = json{{"x", hx}, {"u", hu}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace lvd
