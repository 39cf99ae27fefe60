#include "lpvssa/lpv_system.h"

#include <cmath>
#include <sstream>
#include <utility>

namespace lpvssa {

const char* to_string(TimeDomain domain) {
  return domain == TimeDomain::kDiscrete ? "dt" : "ct";
}

AffineMatrixFunction::AffineMatrixFunction(std::vector<Matrix> coeffs)
    : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    throw InputError("affine matrix function needs at least the constant term");
  }
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    if (coeffs_[i].rows() != coeffs_[0].rows() ||
        coeffs_[i].cols() != coeffs_[0].cols()) {
      std::ostringstream os;
      os << "coefficient " << i << " has shape " << coeffs_[i].rows() << "x"
         << coeffs_[i].cols() << ", expected " << coeffs_[0].rows() << "x"
         << coeffs_[0].cols();
      throw InputError(os.str());
    }
  }
}

AffineMatrixFunction AffineMatrixFunction::Constant(const Matrix& m,
                                                    int num_scheduling) {
  std::vector<Matrix> coeffs(num_scheduling + 1,
                             Matrix::Zero(m.rows(), m.cols()));
  coeffs[0] = m;
  return AffineMatrixFunction(std::move(coeffs));
}

AffineMatrixFunction AffineMatrixFunction::Zero(Eigen::Index rows,
                                                Eigen::Index cols,
                                                int num_scheduling) {
  return Constant(Matrix::Zero(rows, cols), num_scheduling);
}

Eigen::Index AffineMatrixFunction::rows() const {
  return coeffs_.empty() ? 0 : coeffs_[0].rows();
}

Eigen::Index AffineMatrixFunction::cols() const {
  return coeffs_.empty() ? 0 : coeffs_[0].cols();
}

Matrix AffineMatrixFunction::operator()(const Vector& p) const {
  if (p.size() != num_scheduling()) {
    std::ostringstream os;
    os << "scheduling vector has length " << p.size() << ", expected "
       << num_scheduling();
    throw InputError(os.str());
  }
  Matrix out = coeffs_[0];
  for (int i = 1; i <= num_scheduling(); ++i) {
    out += p(i - 1) * coeffs_[i];
  }
  return out;
}

AffineMatrixFunction AffineMatrixFunction::transpose() const {
  std::vector<Matrix> t;
  t.reserve(coeffs_.size());
  for (const auto& m : coeffs_) t.emplace_back(m.transpose());
  return AffineMatrixFunction(std::move(t));
}

bool operator==(const AffineMatrixFunction& a, const AffineMatrixFunction& b) {
  if (a.coeffs_.size() != b.coeffs_.size()) return false;
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i].rows() != b.coeffs_[i].rows() ||
        a.coeffs_[i].cols() != b.coeffs_[i].cols() ||
        a.coeffs_[i] != b.coeffs_[i]) {
      return false;
    }
  }
  return true;
}

bool SchedulingRegion::contains(const Vector& p, double slack) const {
  if (p.size() != lower.size()) return false;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!(p(i) >= lower(i) - slack && p(i) <= upper(i) + slack)) return false;
  }
  return true;
}

bool operator==(const SchedulingRegion& a, const SchedulingRegion& b) {
  return a.lower.size() == b.lower.size() && a.upper.size() == b.upper.size() &&
         a.lower == b.lower && a.upper == b.upper;
}

LpvSsa::LpvSsa(AffineMatrixFunction a, AffineMatrixFunction b,
               AffineMatrixFunction c, AffineMatrixFunction d,
               SchedulingRegion region, TimeDomain domain)
    : a_(std::move(a)),
      b_(std::move(b)),
      c_(std::move(c)),
      d_(std::move(d)),
      region_(std::move(region)),
      domain_(domain) {
  const auto violations = validate(a_, b_, c_, d_, region_);
  if (!violations.empty()) {
    std::ostringstream os;
    os << "invalid LPV-SSA:";
    for (const auto& v : violations) os << "\n  - " << v;
    throw InputError(os.str());
  }
}

bool operator==(const LpvSsa& a, const LpvSsa& b) {
  return a.domain_ == b.domain_ && a.region_ == b.region_ && a.a_ == b.a_ &&
         a.b_ == b.b_ && a.c_ == b.c_ && a.d_ == b.d_;
}

Matrix eval(const AffineMatrixFunction& f, const Vector& p) { return f(p); }

namespace {

std::string shape(Eigen::Index r, Eigen::Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

std::vector<std::string> validate(const AffineMatrixFunction& a,
                                  const AffineMatrixFunction& b,
                                  const AffineMatrixFunction& c,
                                  const AffineMatrixFunction& d,
                                  const SchedulingRegion& region) {
  std::vector<std::string> out;

  const int np = region.dim();
  if (region.lower.size() != region.upper.size()) {
    out.push_back("region bounds have different lengths (" +
                  std::to_string(region.lower.size()) + " vs " +
                  std::to_string(region.upper.size()) + ")");
  } else {
    if (np < 1) out.push_back("scheduling dimension must be at least 1");
    for (int i = 0; i < np; ++i) {
      if (!std::isfinite(region.lower(i)) || !std::isfinite(region.upper(i))) {
        out.push_back("region bound " + std::to_string(i) + " is not finite");
      } else if (!(region.lower(i) < region.upper(i))) {
        out.push_back("region has empty interior in coordinate " +
                      std::to_string(i) + " (lower " +
                      std::to_string(region.lower(i)) + " >= upper " +
                      std::to_string(region.upper(i)) + ")");
      }
    }
  }

  const struct {
    const char* name;
    const AffineMatrixFunction* f;
  } parts[] = {{"A", &a}, {"B", &b}, {"C", &c}, {"D", &d}};
  for (const auto& part : parts) {
    if (part.f->coeffs().empty()) {
      out.push_back(std::string(part.name) + " has no coefficients");
    } else if (part.f->num_scheduling() != np) {
      out.push_back(std::string(part.name) + " has " +
                    std::to_string(part.f->coeffs().size()) +
                    " coefficients, expected n_p + 1 = " +
                    std::to_string(np + 1));
    }
  }

  const auto nx = a.rows();
  const auto nu = b.cols();
  const auto ny = c.rows();
  if (a.rows() != a.cols()) {
    out.push_back("A must be square, got " + shape(a.rows(), a.cols()));
  }
  if (b.rows() != nx) {
    out.push_back("B has shape " + shape(b.rows(), b.cols()) + " but A is " +
                  shape(a.rows(), a.cols()) + " (row mismatch)");
  }
  if (c.cols() != nx) {
    out.push_back("C has shape " + shape(c.rows(), c.cols()) + " but A is " +
                  shape(a.rows(), a.cols()) + " (column mismatch)");
  }
  if (d.rows() != ny || d.cols() != nu) {
    out.push_back("D has shape " + shape(d.rows(), d.cols()) +
                  ", expected n_y x n_u = " + shape(ny, nu));
  }
  if (nu < 1) out.push_back("input dimension n_u must be at least 1");
  if (ny < 1) out.push_back("output dimension n_y must be at least 1");

  for (const auto& part : parts) {
    for (std::size_t i = 0; i < part.f->coeffs().size(); ++i) {
      if (!part.f->coeffs()[i].allFinite()) {
        out.push_back(std::string(part.name) + "_" + std::to_string(i) +
                      " has non-finite entries");
      }
    }
  }
  return out;
}

std::vector<std::string> validate(const LpvSsa& sys) {
  return validate(sys.A(), sys.B(), sys.C(), sys.D(), sys.region());
}

LpvSsa transpose_dual(const LpvSsa& sys) {
  return LpvSsa(sys.A().transpose(), sys.C().transpose(), sys.B().transpose(),
                sys.D().transpose(), sys.region(), sys.domain());
}

bool same_signature(const LpvSsa& a, const LpvSsa& b) {
  return a.nu() == b.nu() && a.ny() == b.ny() && a.np() == b.np() &&
         a.domain() == b.domain() && a.region() == b.region();
}

void require_same_signature(const LpvSsa& a, const LpvSsa& b,
                            const char* what) {
  if (a.nu() != b.nu() || a.ny() != b.ny() || a.np() != b.np() ||
      a.domain() != b.domain()) {
    std::ostringstream os;
    os << what << ": signature mismatch (n_u " << a.nu() << "/" << b.nu()
       << ", n_y " << a.ny() << "/" << b.ny() << ", n_p " << a.np() << "/"
       << b.np() << ", domain " << to_string(a.domain()) << "/"
       << to_string(b.domain()) << ")";
    throw InputError(os.str());
  }
  if (!(a.region() == b.region())) {
    throw InputError(std::string(what) + ": scheduling regions differ");
  }
}

}  // namespace lpvssa
