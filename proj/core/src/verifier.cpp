#include "sasaki/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace sasaki {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kFloorFactor = 10.0;

double real_inner(const ComplexPoint& a, const ComplexPoint& b) {
  return a.dot(b).real();  // Eigen's dot conjugates the first argument
}

ComplexPoint to_complex(std::span<const double> x) {
  ComplexPoint z(static_cast<Eigen::Index>(x.size()));
  for (std::size_t j = 0; j < x.size(); ++j) z(static_cast<Eigen::Index>(j)) = {x[j], 0.0};
  return z;
}

class CheckAccumulator {
 public:
  CheckAccumulator(std::string name, double tolerance)
      : name_(std::move(name)), tolerance_(tolerance) {}

  void observe(double violation, double scale) {
    if (std::isnan(violation)) violation = std::numeric_limits<double>::infinity();
    max_ = std::max(max_, violation);
    scale_ = std::max(scale_, scale);
  }

  CheckOutcome finish() const {
    CheckOutcome out;
    out.name = name_;
    out.max_violation = max_;
    out.tolerance = tolerance_;
    out.floor = kFloorFactor * kEps * std::max(1.0, scale_);
    out.passed = max_ <= tolerance_ && tolerance_ >= out.floor;
    return out;
  }

 private:
  std::string name_;
  double tolerance_;
  double max_ = 0.0;
  double scale_ = 1.0;
};

}  // namespace

ContactData::ContactData(ReebCoefficients coeffs, lattice::IntMatrix kernel)
    : b_(std::move(coeffs.b)) {
  if (kernel.rows() != b_.size() && kernel.cols() > 0)
    throw std::invalid_argument("ContactData: kernel and coefficients disagree on d");
  kernel_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(b_.size()),
                                  static_cast<Eigen::Index>(kernel.cols()));
  for (std::size_t i = 0; i < kernel.rows(); ++i)
    for (std::size_t c = 0; c < kernel.cols(); ++c)
      kernel_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          kernel(i, c).convert_to<double>();
}

double ContactData::r(const ComplexPoint& z) const {
  if (static_cast<std::size_t>(z.size()) != b_.size())
    throw std::invalid_argument("ContactData: point has the wrong length");
  double rho = 0.0;
  for (Eigen::Index j = 0; j < z.size(); ++j) rho += 2.0 * b_[static_cast<std::size_t>(j)] * std::norm(z(j));
  return std::sqrt(std::max(rho, 0.0));
}

double ContactData::r(std::span<const double> x) const { return r(to_complex(x)); }

ComplexPoint ContactData::reeb_field(const ComplexPoint& z) const {
  return std::complex<double>(0.0, 1.0) * z;
}

ComplexPoint ContactData::k_direction(const ComplexPoint& z, std::size_t column) const {
  ComplexPoint out(z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j)
    out(j) = std::complex<double>(0.0, kernel_(j, static_cast<Eigen::Index>(column))) * z(j);
  return out;
}

ComplexPoint ContactData::horizontal(const ComplexPoint& z, const ComplexPoint& x) const {
  // Orbit directions {i a o z, a o z}, made orthogonal to span{i z, z} and to
  // each other in the real inner product of R^{2d}. On the level set they are
  // already orthogonal to i z and z; elsewhere this keeps the Reeb field horizontal.
  const double zn = z.norm();
  std::vector<ComplexPoint> radial;
  if (zn > 0.0) {
    radial.push_back(ComplexPoint(std::complex<double>(0.0, 1.0) * z / zn));
    radial.push_back(ComplexPoint(z / zn));
  }
  std::vector<ComplexPoint> basis;
  for (Eigen::Index c = 0; c < kernel_.cols(); ++c) {
    const ComplexPoint rot = k_direction(z, static_cast<std::size_t>(c));
    for (ComplexPoint v : {rot, ComplexPoint(std::complex<double>(0.0, -1.0) * rot)}) {
      for (const auto& e : radial) v -= real_inner(e, v) * e;
      for (const auto& e : basis) v -= real_inner(e, v) * e;
      const double n = v.norm();
      if (n > 1e-14 * std::max(1.0, zn)) basis.push_back(v / n);
    }
  }
  ComplexPoint h = x;
  for (const auto& e : basis) h -= real_inner(e, h) * e;
  return h;
}

EtaPairing ContactData::eta(const ComplexPoint& z, const ComplexPoint& x) const {
  const double rr = r(z);
  if (!(rr > 0.0)) throw std::domain_error("eval_eta: r vanishes at z");
  const ComplexPoint h = horizontal(z, x);
  const double rho = rr * rr;
  EtaPairing out;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    const std::complex<double> w = std::conj(z(j)) * h(j);
    out.eta += b_[static_cast<std::size_t>(j)] * w.imag();
    out.radial += b_[static_cast<std::size_t>(j)] * w.real();
  }
  out.eta *= 2.0 / rho;
  out.radial *= 2.0 / rho;
  return out;
}

double ContactData::omega(const ComplexPoint& z, const ComplexPoint& x, const ComplexPoint& y) const {
  const ComplexPoint hx = horizontal(z, x);
  const ComplexPoint hy = horizontal(z, y);
  double s = 0.0;
  for (Eigen::Index j = 0; j < z.size(); ++j)
    s += b_[static_cast<std::size_t>(j)] * (std::conj(hx(j)) * hy(j)).imag();
  return 2.0 * s;
}

EtaPairing eval_eta(const ContactData& ctx, const ComplexPoint& z, const ComplexPoint& x) {
  return ctx.eta(z, x);
}

bool VerificationReport::passed() const {
  return failures.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const CheckOutcome& c) { return c.passed; });
}

const CheckOutcome* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

Eigen::MatrixXd tangent_frame(const QuadricSystem& system, std::span<const double> x) {
  const Eigen::MatrixXd jac = constraint_jacobian(system, x);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
  lu.setThreshold(1e-10);
  const Eigen::MatrixXd kernel = lu.kernel();
  if (kernel.cols() == 0 || kernel.norm() == 0.0) return Eigen::MatrixXd(jac.cols(), 0);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(kernel);
  return qr.householderQ() * Eigen::MatrixXd::Identity(kernel.rows(), kernel.cols());
}

VerificationReport verify_link(const QuadricSystem& system, const ContactData& ctx,
                               const SampleSet& samples, const VerifyOptions& options) {
  if (ctx.size() != system.size())
    throw std::invalid_argument("verify_link: contact data and system disagree on d");
  VerificationReport report;
  report.sample_count = samples.points.size();
  report.seed = samples.seed;

  CheckAccumulator eta_check("eta_vanishes", options.pairing_tol);
  CheckAccumulator omega_check("omega_vanishes", options.pairing_tol);
  CheckAccumulator cone_check("cone_tangency", options.residual_tol);
  CheckAccumulator level_check("level_set", options.residual_tol);
  CheckAccumulator reeb_check("reeb_pairing", options.pairing_tol);
  CheckAccumulator frame_check("frame_rank", 0.0);

  const std::size_t expected_dim = system.size() - system.k() - 1;
  double b_scale = 0.0;
  for (double v : ctx.b()) b_scale = std::max(b_scale, std::abs(v));

  for (std::size_t s = 0; s < samples.points.size(); ++s) {
    const auto& x = samples.points[s];
    const ComplexPoint z = to_complex(x);

    const Eigen::MatrixXd frame = tangent_frame(system, x);
    if (static_cast<std::size_t>(frame.cols()) != expected_dim) {
      std::ostringstream msg;
      msg << "sample " << s << ": tangent frame has dimension " << frame.cols() << ", expected "
          << expected_dim;
      report.failures.push_back(msg.str());
      frame_check.observe(1.0, 1.0);
      continue;
    }
    frame_check.observe(0.0, 1.0);

    std::vector<ComplexPoint> vecs;
    for (Eigen::Index c = 0; c < frame.cols(); ++c) vecs.push_back(frame.col(c).cast<std::complex<double>>());
    for (const auto& v : vecs) eta_check.observe(std::abs(ctx.eta(z, v).eta), 1.0);
    for (std::size_t a = 0; a < vecs.size(); ++a)
      for (std::size_t b = a + 1; b < vecs.size(); ++b)
        omega_check.observe(std::abs(ctx.omega(z, vecs[a], vecs[b])), 2.0 * b_scale);

    // d/dt A((t x) o (t x)) at t = 1.
    double tangency = 0.0, tangency_scale = 0.0;
    for (std::size_t i = 0; i < system.k(); ++i) {
      double v = 0.0, mag = 0.0;
      for (std::size_t j = 0; j < system.size(); ++j) {
        const double term = 2.0 * system.homogeneous(i, j).convert_to<double>() * x[j] * x[j];
        v += term;
        mag += std::abs(term);
      }
      tangency = std::max(tangency, std::abs(v));
      tangency_scale = std::max(tangency_scale, mag);
    }
    cone_check.observe(tangency, tangency_scale);

    std::vector<double> scaled(x.begin(), x.end());
    for (double& v : scaled) v /= std::sqrt(2.0);
    level_check.observe(std::abs(ctx.r(scaled) - 1.0), 1.0);

    reeb_check.observe(std::abs(ctx.eta(z, ctx.reeb_field(z)).eta - 1.0), 1.0);
  }

  report.checks = {eta_check.finish(),   omega_check.finish(), cone_check.finish(),
                   level_check.finish(), reeb_check.finish(),  frame_check.finish()};
  report.checks.back().floor = 0.0;
  report.checks.back().passed = report.checks.back().max_violation == 0.0;
  return report;
}

HolomorphicVolume evaluate_holomorphic_volume(std::span<const ComplexPoint> frame) {
  const auto m = static_cast<Eigen::Index>(frame.size());
  Eigen::MatrixXcd mat(m, m);
  Eigen::MatrixXd gram(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    if (frame[static_cast<std::size_t>(a)].size() != m)
      throw std::invalid_argument("evaluate_holomorphic_volume: frame must be square");
    mat.col(a) = frame[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < m; ++b)
      gram(a, b) = real_inner(frame[static_cast<std::size_t>(a)], frame[static_cast<std::size_t>(b)]);
  }
  HolomorphicVolume out;
  out.value = mat.determinant();
  out.volume = std::sqrt(std::max(0.0, gram.determinant()));
  return out;
}

VerificationReport verify_flat_special(std::size_t n, const SampleSet& samples,
                                       const FlatOptions& options) {
  const std::size_t dim = n + 1;
  for (const auto& x : samples.points) {
    double nrm = 0.0;
    for (double v : x) nrm += v * v;
    if (x.size() != dim || std::abs(std::sqrt(nrm) - 1.0) > 1e-10)
      throw std::invalid_argument(
          "verify_flat_special: flat model expects points of the unit sphere in R^{n+1}");
  }
  VerificationReport report;
  report.sample_count = samples.points.size();
  report.seed = samples.seed;
  CheckAccumulator im_check("im_omega_vanishes", options.im_tol);
  CheckAccumulator cal_check("calibration_equality", options.calibration_tol);

  for (const auto& x : samples.points) {
    Eigen::VectorXd euler = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(dim));
    euler.normalize();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(euler.transpose());
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(lu.kernel());
    Eigen::MatrixXd tangent = qr.householderQ() * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim),
                                                                            static_cast<Eigen::Index>(n));
    Eigen::MatrixXd real_frame(dim, dim);
    real_frame << euler, tangent;
    if (real_frame.determinant() < 0) tangent.col(0) = -tangent.col(0);

    std::vector<ComplexPoint> frame;
    frame.push_back(options.frame == FlatFrame::lagrangian
                        ? ComplexPoint(euler.cast<std::complex<double>>())
                        : ComplexPoint(std::complex<double>(0.0, 1.0) * euler.cast<std::complex<double>>()));
    for (Eigen::Index c = 0; c < tangent.cols(); ++c)
      frame.push_back(tangent.col(c).cast<std::complex<double>>());

    const HolomorphicVolume hv = evaluate_holomorphic_volume(frame);
    im_check.observe(std::abs(hv.value.imag()), 1.0);
    cal_check.observe(std::abs(std::abs(hv.value.real()) - hv.volume), 1.0);
  }
  report.checks = {im_check.finish(), cal_check.finish()};
  return report;
}

SampleSet perturb_samples(const SampleSet& samples, double amplitude, std::uint64_t seed) {
  SampleSet out = samples;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-amplitude, amplitude);
  for (auto& x : out.points)
    for (double& v : x) v += noise(rng);
  return out;
}

}  // namespace sasaki
