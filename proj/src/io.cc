#include "lpvssa/io.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"

namespace lpvssa::io {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

DocumentError::DocumentError(std::string path, const std::string& message)
    : InputError((path.empty() ? std::string("(document)") : path) + ": " +
                 message),
      path_(std::move(path)) {}

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DocumentError("", std::string("not valid JSON: ") + e.what());
  }
}

void require_keys(const json& j, const std::string& path,
                  const std::set<std::string>& allowed,
                  const std::set<std::string>& required) {
  if (!j.is_object()) throw DocumentError(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw DocumentError(path + "/" + key, "unknown field");
    }
  }
  for (const auto& key : required) {
    if (!j.contains(key)) throw DocumentError(path + "/" + key, "missing field");
  }
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw DocumentError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw DocumentError(path, "number is not finite");
  return v;
}

long long as_count(const json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    throw DocumentError(path, "expected a nonnegative integer");
  }
  const auto v = j.get<long long>();
  if (v < 0) throw DocumentError(path, "expected a nonnegative integer");
  return v;
}

const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw DocumentError(path, "expected an array");
  return j;
}

Vector as_vector(const json& j, const std::string& path) {
  as_array(j, path);
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) =
        as_number(j[i], path + "/" + std::to_string(i));
  }
  return v;
}

Matrix as_matrix(const json& j, const std::string& path) {
  require_keys(j, path, {"rows", "cols", "data"}, {"rows", "cols", "data"});
  const auto rows = as_count(j["rows"], path + "/rows");
  const auto cols = as_count(j["cols"], path + "/cols");
  const json& data = as_array(j["data"], path + "/data");
  if (static_cast<long long>(data.size()) != rows * cols) {
    std::ostringstream os;
    os << "expected rows * cols = " << rows * cols << " entries, got "
       << data.size();
    throw DocumentError(path + "/data", os.str());
  }
  Matrix m(rows, cols);
  for (long long r = 0; r < rows; ++r) {
    for (long long c = 0; c < cols; ++c) {
      const auto k = static_cast<std::size_t>(r * cols + c);
      m(r, c) = as_number(data[k], path + "/data/" + std::to_string(k));
    }
  }
  return m;
}

ordered_json matrix_json(const Matrix& m) {
  ordered_json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  ordered_json data = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  j["data"] = std::move(data);
  return j;
}

ordered_json vector_json(const Vector& v) {
  ordered_json j = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

std::vector<Matrix> coefficient_list(const json& doc, const char* name,
                                     int np) {
  const std::string path = std::string("/") + name;
  const json& list = as_array(doc[name], path);
  if (static_cast<int>(list.size()) != np + 1) {
    std::ostringstream os;
    os << "expected " << np + 1 << " coefficient matrices (n_p = " << np
       << "), got " << list.size();
    throw DocumentError(path, os.str());
  }
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    out.push_back(as_matrix(list[i], path + "/" + std::to_string(i)));
  }
  return out;
}

void require_shape(const std::vector<Matrix>& ms, const char* name,
                   Eigen::Index rows, Eigen::Index cols, const char* what) {
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i].rows() != rows || ms[i].cols() != cols) {
      std::ostringstream os;
      os << "shape " << ms[i].rows() << "x" << ms[i].cols() << ", expected "
         << rows << "x" << cols << " (" << what << ")";
      throw DocumentError(std::string("/") + name + "/" + std::to_string(i),
                          os.str());
    }
  }
}

TimeDomain parse_domain(const json& j, const std::string& path) {
  if (j == "dt") return TimeDomain::kDiscrete;
  if (j == "ct") return TimeDomain::kContinuous;
  throw DocumentError(path, "expected \"dt\" or \"ct\"");
}

}  // namespace

LpvSsa parse_system(const std::string& text) {
  const json doc = parse_json(text);
  require_keys(doc, "",
               {"schema_version", "domain", "region", "A", "B", "C", "D"},
               {"schema_version", "domain", "region", "A", "B", "C", "D"});
  if (!doc["schema_version"].is_string()) {
    throw DocumentError("/schema_version", "expected a string");
  }
  if (doc["schema_version"].get<std::string>() != kSchemaVersion) {
    throw DocumentError("/schema_version",
                        "unsupported schema version '" +
                            doc["schema_version"].get<std::string>() + "'");
  }
  const TimeDomain domain = parse_domain(doc["domain"], "/domain");

  const json& reg = doc["region"];
  require_keys(reg, "/region", {"lower", "upper"}, {"lower", "upper"});
  SchedulingRegion region{as_vector(reg["lower"], "/region/lower"),
                          as_vector(reg["upper"], "/region/upper")};
  if (region.lower.size() != region.upper.size()) {
    throw DocumentError("/region/upper",
                        "length differs from /region/lower");
  }
  const int np = region.dim();
  if (np < 1) throw DocumentError("/region/lower", "n_p must be at least 1");
  for (int i = 0; i < np; ++i) {
    if (!(region.lower(i) < region.upper(i))) {
      throw DocumentError("/region/upper/" + std::to_string(i),
                          "upper bound must exceed the lower bound");
    }
  }

  auto a = coefficient_list(doc, "A", np);
  auto b = coefficient_list(doc, "B", np);
  auto c = coefficient_list(doc, "C", np);
  auto d = coefficient_list(doc, "D", np);
  const Eigen::Index nx = a[0].rows();
  const Eigen::Index nu = b[0].cols();
  const Eigen::Index ny = c[0].rows();
  require_shape(a, "A", nx, nx, "n_x x n_x");
  require_shape(b, "B", nx, nu, "n_x x n_u");
  require_shape(c, "C", ny, nx, "n_y x n_x");
  require_shape(d, "D", ny, nu, "n_y x n_u");
  if (nu < 1) throw DocumentError("/B/0/cols", "n_u must be at least 1");
  if (ny < 1) throw DocumentError("/C/0/rows", "n_y must be at least 1");

  return LpvSsa(AffineMatrixFunction(std::move(a)),
                AffineMatrixFunction(std::move(b)),
                AffineMatrixFunction(std::move(c)),
                AffineMatrixFunction(std::move(d)), std::move(region), domain);
}

std::string serialize_system(const LpvSsa& sys) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["domain"] = to_string(sys.domain());
  doc["region"]["lower"] = vector_json(sys.region().lower);
  doc["region"]["upper"] = vector_json(sys.region().upper);
  const std::pair<const char*, const AffineMatrixFunction*> parts[] = {
      {"A", &sys.A()}, {"B", &sys.B()}, {"C", &sys.C()}, {"D", &sys.D()}};
  for (const auto& [name, f] : parts) {
    ordered_json list = ordered_json::array();
    for (const auto& m : f->coeffs()) list.push_back(matrix_json(m));
    doc[name] = std::move(list);
  }
  return doc.dump(2) + "\n";
}

Signal parse_signal(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("kind")) {
    throw DocumentError("/kind", "missing field");
  }
  const TimeDomain kind = parse_domain(doc["kind"], "/kind");
  if (kind == TimeDomain::kDiscrete) {
    require_keys(doc, "", {"kind", "values"}, {"kind", "values"});
  } else {
    require_keys(doc, "", {"kind", "times", "values", "interpolation"},
                 {"kind", "times", "values"});
  }
  const json& rows = as_array(doc["values"], "/values");
  if (rows.empty()) throw DocumentError("/values", "expected at least one sample");
  std::vector<Vector> values;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::string path = "/values/" + std::to_string(k);
    values.push_back(as_vector(rows[k], path));
    if (values.back().size() != values.front().size()) {
      throw DocumentError(path, "sample dimension differs from /values/0");
    }
  }
  try {
    if (kind == TimeDomain::kDiscrete) return Signal::Discrete(std::move(values));
    const Vector times = as_vector(doc["times"], "/times");
    Interpolation interp = Interpolation::kPiecewiseConstant;
    if (doc.contains("interpolation")) {
      const json& tag = doc["interpolation"];
      if (tag == "piecewise-linear") {
        interp = Interpolation::kPiecewiseLinear;
      } else if (tag != "piecewise-constant") {
        throw DocumentError("/interpolation",
                            "expected \"piecewise-constant\" or "
                            "\"piecewise-linear\"");
      }
    }
    return Signal::Continuous(
        std::vector<double>(times.data(), times.data() + times.size()),
        std::move(values), interp);
  } catch (const DocumentError&) {
    throw;
  } catch (const InputError& e) {
    throw DocumentError("", e.what());
  }
}

std::string serialize_signal(const Signal& s) {
  ordered_json doc;
  doc["kind"] = to_string(s.domain());
  if (s.domain() == TimeDomain::kContinuous) doc["times"] = s.times();
  ordered_json rows = ordered_json::array();
  for (const auto& v : s.values()) rows.push_back(vector_json(v));
  doc["values"] = std::move(rows);
  if (s.domain() == TimeDomain::kContinuous) {
    doc["interpolation"] = to_string(s.interpolation());
  }
  return doc.dump(2) + "\n";
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const int nx = traj.x.dim();
  const int ny = traj.y.dim();
  os << "t";
  for (int i = 1; i <= nx; ++i) os << ",x" << i;
  for (int i = 1; i <= ny; ++i) os << ",y" << i;
  os << "\n";
  const auto old_precision = os.precision(17);
  for (std::size_t k = 0; k < traj.y.size(); ++k) {
    if (traj.y.domain() == TimeDomain::kDiscrete) {
      os << k;
    } else {
      os << traj.y.times()[k];
    }
    for (int i = 0; i < nx; ++i) os << "," << traj.x.values()[k](i);
    for (int i = 0; i < ny; ++i) os << "," << traj.y.values()[k](i);
    os << "\n";
  }
  os.precision(old_precision);
}

std::string trajectory_json(const Trajectory& traj) {
  ordered_json doc;
  doc["kind"] = to_string(traj.y.domain());
  ordered_json times = ordered_json::array();
  for (std::size_t k = 0; k < traj.y.size(); ++k) {
    if (traj.y.domain() == TimeDomain::kDiscrete) {
      times.push_back(k);
    } else {
      times.push_back(traj.y.times()[k]);
    }
  }
  doc["times"] = std::move(times);
  ordered_json xs = ordered_json::array();
  ordered_json ys = ordered_json::array();
  for (const auto& v : traj.x.values()) xs.push_back(vector_json(v));
  for (const auto& v : traj.y.values()) ys.push_back(vector_json(v));
  doc["x"] = std::move(xs);
  doc["y"] = std::move(ys);
  return doc.dump(2) + "\n";
}

std::string serialize_sidecar(const Minimization& m) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["order"] = m.result.order;
  doc["transform"] = matrix_json(m.result.transform);
  doc["projection"] = matrix_json(m.result.projection);
  doc["claim"] = to_string(m.claim);
  doc["rc"]["dt_invertibility"] = to_string(m.rc.dt_invertibility);
  if (m.rc.det_poly_1d) doc["rc"]["det_poly_1d"] = *m.rc.det_poly_1d;
  if (m.rc.witness) doc["rc"]["witness"] = vector_json(*m.rc.witness);
  return doc.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw InputError("failed writing '" + path + "'");
}

}  // namespace lpvssa::io
