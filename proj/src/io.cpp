#include "mot/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mot {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

constexpr std::size_t kInlineLimit = 100000;

json shape_json(const Shape& s) {
  json arr = json::array();
  for (std::size_t v : s.sizes) arr.push_back(v);
  return arr;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

json read_json(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  return json::parse(f);
}

// Numbers serialized as %.17g strings so output bytes are locale- and
// library-stable; load accepts both strings and plain JSON numbers.
json num(double v) { return fmt_double(v); }

double as_double(const json& j) {
  if (j.is_string()) return std::stod(j.get<std::string>());
  return j.get<double>();
}

json vec_json(const Vec& v) {
  json arr = json::array();
  for (double x : v) arr.push_back(num(x));
  return arr;
}

Vec vec_from(const json& j) {
  Vec v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(as_double(e));
  return v;
}

DenseTensor tensor_from_json(const json& j, const fs::path& dir) {
  std::vector<std::size_t> sizes;
  for (const auto& e : j.at("sizes")) sizes.push_back(e.get<std::size_t>());
  DenseTensor t{Shape(sizes)};
  if (j.contains("data")) {
    t.data = vec_from(j.at("data"));
  } else {
    if (j.value("dtype", "f64le") != "f64le")
      throw std::runtime_error("unsupported dtype");
    const fs::path bin = dir / j.at("data_file").get<std::string>();
    std::ifstream f(bin, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + bin.string());
    f.read(reinterpret_cast<char*>(t.data.data()),
           static_cast<std::streamsize>(t.data.size() * sizeof(double)));
    if (static_cast<std::size_t>(f.gcount()) != t.data.size() * sizeof(double))
      throw std::runtime_error("tensor binary truncated: " + bin.string());
  }
  if (t.data.size() != t.shape.count())
    throw std::runtime_error("tensor data length does not match sizes");
  return t;
}

json tensor_to_json(const DenseTensor& t, const std::string& jsonPath) {
  json j;
  j["sizes"] = shape_json(t.shape);
  if (t.data.size() <= kInlineLimit) {
    j["data"] = vec_json(t.data);
  } else {
    const fs::path bin = fs::path(jsonPath).replace_extension(".bin");
    std::ofstream f(bin, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + bin.string());
    f.write(reinterpret_cast<const char*>(t.data.data()),
            static_cast<std::streamsize>(t.data.size() * sizeof(double)));
    j["m"] = t.shape.axes();
    j["dtype"] = "f64le";
    j["data_file"] = bin.filename().string();
  }
  return j;
}

}  // namespace

void save_tensor(const DenseTensor& t, const std::string& path) {
  write_text(path, tensor_to_json(t, path).dump(2) + "\n");
}

DenseTensor load_tensor(const std::string& path) {
  return tensor_from_json(read_json(path), fs::path(path).parent_path());
}

void save_instance(const MotInstance& inst, const std::string& path) {
  json j;
  j["cost"] = tensor_to_json(inst.cost, path);
  json margs = json::array();
  for (const Vec& r : inst.marginals) margs.push_back(vec_json(r));
  j["marginals"] = margs;
  write_text(path, j.dump(2) + "\n");
}

MotInstance load_instance(const std::string& path) {
  const json j = read_json(path);
  DenseTensor cost =
      tensor_from_json(j.at("cost"), fs::path(path).parent_path());
  MarginalSet marginals;
  for (const auto& e : j.at("marginals")) marginals.push_back(vec_from(e));
  return MotInstance(std::move(cost), std::move(marginals));
}

std::string SolveReport::trace_csv() const {
  std::ostringstream os;
  const bool withTheta = !trace.empty() && trace.front().hasTheta;
  os << (withTheta ? "t,E,phi,axis,theta\n" : "t,E,phi,axis\n");
  for (const TraceRow& row : trace) {
    os << row.t << ',' << fmt_double(row.E) << ',' << fmt_double(row.phi)
       << ',' << row.axis;
    if (withTheta) os << ',' << fmt_double(row.theta);
    os << '\n';
  }
  return os.str();
}

std::string report_json(const SolveReport& rep) {
  json j;
  j["solver"] = rep.solver;
  j["converged"] = rep.converged;
  j["iterations"] = rep.iterations;
  j["final_E"] = num(rep.finalE);
  j["final_phi"] = num(rep.finalPhi);
  j["eps_prime"] = num(rep.epsPrime);
  j["max_iter"] = rep.maxIter;
  j["R"] = num(rep.bnds.R);
  j["Rbar"] = num(rep.bnds.Rbar);
  j["eta"] = num(rep.bnds.eta);
  json tr = json::array();
  for (const TraceRow& row : rep.trace) {
    json e;
    e["t"] = row.t;
    e["E"] = num(row.E);
    e["phi"] = num(row.phi);
    e["axis"] = row.axis;
    if (row.hasTheta) e["theta"] = num(row.theta);
    tr.push_back(e);
  }
  j["trace"] = tr;
  return j.dump(2) + "\n";
}

std::string file_hash(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::uint64_t h = 14695981039346656037ull;
  char buf[65536];
  while (f) {
    f.read(buf, sizeof(buf));
    const std::streamsize got = f.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  char out[20];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(h));
  return out;
}

}  // namespace mot
