#include "sfkit/trig.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sfkit/errors.hpp"

namespace sfkit {
namespace {

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// coefficients below this are dropped after canonicalization
constexpr double kDropTol = 1e-15;

bool lex_less(const FrequencyVector& a, const FrequencyVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].value() < b[i].value()) return true;
    if (a[i].value() > b[i].value()) return false;
  }
  return false;
}

bool same_vector(const FrequencyVector& a, const FrequencyVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same(a[i], b[i])) return false;
  return true;
}

Frequency frequency_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Frequency::rational(j.get<std::int64_t>());
  if (j.is_number()) return Frequency(j.get<double>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Frequency::rational(std::stoll(s));
      return Frequency::rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
      throw DomainError("unparseable frequency '" + s + "'");
    }
  }
  throw DomainError("frequency must be a number or a \"p/q\" string");
}

nlohmann::json frequency_to_json(const Frequency& f) {
  if (f.is_exact()) {
    const Rational& r = *f.exact();
    if (r.denominator() == 1) return r.numerator();
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
  }
  return f.value();
}

Complex complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw DomainError("complex entries are [re, im] pairs or plain numbers");
}

}  // namespace

Frequency::Frequency(double v) : value_(v) {
  if (!std::isfinite(v)) throw DomainError("frequency must be finite");
}

Frequency::Frequency(Rational r) : value_(to_double(r)), exact_(r) {}

std::optional<long> Frequency::as_integer() const {
  if (exact_) {
    if (exact_->denominator() == 1) return static_cast<long>(exact_->numerator());
    return std::nullopt;
  }
  const double r = std::round(value_);
  if (std::abs(value_ - r) <= kFrequencyMergeTol) return static_cast<long>(r);
  return std::nullopt;
}

Frequency Frequency::operator-() const {
  if (exact_) return Frequency(-*exact_);
  return Frequency(-value_);
}

Frequency operator+(const Frequency& a, const Frequency& b) {
  if (a.exact_ && b.exact_) return Frequency(*a.exact_ + *b.exact_);
  return Frequency(a.value_ + b.value_);
}

bool same(const Frequency& a, const Frequency& b) {
  if (a.exact_ && b.exact_) return *a.exact_ == *b.exact_;
  return std::abs(a.value_ - b.value_) <= kFrequencyMergeTol;
}

TrigPolynomial::TrigPolynomial(int N, int n) : N_(N), n_(n) {
  if (N < 1 || n < 1) throw StructuralError("trig polynomial needs N >= 1 and n >= 1");
}

TrigPolynomial::TrigPolynomial(int N, int n, std::vector<Term> terms)
    : TrigPolynomial(N, n) {
  for (const auto& t : terms) check_term(t);
  terms_ = std::move(terms);
  canonicalize();
}

void TrigPolynomial::check_term(const Term& t) const {
  if (static_cast<int>(t.freq.size()) != n_)
    throw StructuralError("frequency has " + std::to_string(t.freq.size()) +
                          " components, expected " + std::to_string(n_));
  if (t.coeff.rows() != N_ || t.coeff.cols() != N_)
    throw StructuralError("coefficient is not " + std::to_string(N_) + "x" + std::to_string(N_));
}

void TrigPolynomial::canonicalize() {
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const Term& a, const Term& b) { return lex_less(a.freq, b.freq); });
  std::vector<bool> gone(terms_.size(), false);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (gone[i]) continue;
    // candidates sit in a window where the first component is within tolerance
    for (std::size_t j = i + 1; j < terms_.size(); ++j) {
      if (terms_[j].freq[0].value() - terms_[i].freq[0].value() > kFrequencyMergeTol) break;
      if (gone[j] || !same_vector(terms_[i].freq, terms_[j].freq)) continue;
      terms_[i].coeff += terms_[j].coeff;
      for (int c = 0; c < n_; ++c)
        if (!terms_[i].freq[c].is_exact() && terms_[j].freq[c].is_exact())
          terms_[i].freq[c] = terms_[j].freq[c];
      gone[j] = true;
    }
  }
  std::vector<Term> kept;
  kept.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (!gone[i] && terms_[i].coeff.cwiseAbs().maxCoeff() > kDropTol) kept.push_back(std::move(terms_[i]));
  terms_ = std::move(kept);
}

TrigPolynomial TrigPolynomial::constant(int n, const Matrix& c) {
  if (c.rows() != c.cols()) throw StructuralError("constant coefficient must be square");
  return monomial(FrequencyVector(static_cast<std::size_t>(n), Frequency::rational(0)), c);
}

TrigPolynomial TrigPolynomial::identity(int N, int n) {
  return constant(n, Matrix::Identity(N, N));
}

TrigPolynomial TrigPolynomial::monomial(const FrequencyVector& xi, const Matrix& c) {
  if (c.rows() != c.cols()) throw StructuralError("monomial coefficient must be square");
  return TrigPolynomial(static_cast<int>(c.rows()), static_cast<int>(xi.size()), {{xi, c}});
}

TrigPolynomial TrigPolynomial::spectral_monomial(const FrequencyVector& xi,
                                                 const FrequencyVector& eta, const Matrix& p) {
  if (xi.size() != eta.size()) throw StructuralError("spectral monomial frequencies differ in length");
  if (p.rows() != p.cols()) throw StructuralError("projection must be square");
  const double defect = (p * p - p).cwiseAbs().maxCoeff() + (p - p.adjoint()).cwiseAbs().maxCoeff();
  if (defect > 1e-12) throw DomainError("spectral monomial needs an orthogonal projection");
  const Matrix q = Matrix::Identity(p.rows(), p.cols()) - p;
  return TrigPolynomial(static_cast<int>(p.rows()), static_cast<int>(xi.size()), {{xi, p}, {eta, q}});
}

TrigPolynomial TrigPolynomial::adjoint() const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    FrequencyVector f;
    for (const auto& c : t.freq) f.push_back(-c);
    out.push_back({std::move(f), t.coeff.adjoint()});
  }
  return TrigPolynomial(N_, n_, std::move(out));
}

TrigPolynomial TrigPolynomial::derivative(int j) const {
  if (j < 0 || j >= n_) throw StructuralError("derivative index out of range");
  std::vector<double> dir(static_cast<std::size_t>(n_), 0.0);
  dir[static_cast<std::size_t>(j)] = 1.0;
  return directional_derivative(dir);
}

TrigPolynomial TrigPolynomial::directional_derivative(const std::vector<double>& dir) const {
  if (static_cast<int>(dir.size()) != n_) throw StructuralError("direction has wrong length");
  std::vector<Term> out;
  for (const auto& t : terms_) {
    double s = 0.0;
    for (int c = 0; c < n_; ++c) s += dir[c] * t.freq[c].value();
    out.push_back({t.freq, t.coeff * Complex(0.0, s)});
  }
  return TrigPolynomial(N_, n_, std::move(out));
}

Matrix TrigPolynomial::evaluate(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n_) throw StructuralError("evaluation point has wrong length");
  Matrix out = Matrix::Zero(N_, N_);
  for (const auto& t : terms_) {
    double phase = 0.0;
    for (int c = 0; c < n_; ++c) phase += t.freq[c].value() * x[c];
    out += t.coeff * std::polar(1.0, phase);
  }
  return out;
}

Matrix TrigPolynomial::zero_frequency() const {
  const FrequencyVector zero(static_cast<std::size_t>(n_), Frequency::rational(0));
  for (const auto& t : terms_)
    if (same_vector(t.freq, zero)) return t.coeff;
  return Matrix::Zero(N_, N_);
}

TrigPolynomial TrigPolynomial::trace() const {
  std::vector<Term> out;
  for (const auto& t : terms_) out.push_back({t.freq, Matrix::Constant(1, 1, t.coeff.trace())});
  return TrigPolynomial(1, n_, std::move(out));
}

double TrigPolynomial::max_frequency() const {
  double m = 0.0;
  for (const auto& t : terms_) {
    double s = 0.0;
    for (const auto& c : t.freq) s += c.value() * c.value();
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

bool TrigPolynomial::has_integer_frequencies() const {
  for (const auto& t : terms_)
    for (const auto& c : t.freq)
      if (!c.as_integer()) return false;
  return true;
}

bool TrigPolynomial::is_unitary(double tol) const {
  const TrigPolynomial one = identity(N_, n_);
  for (const TrigPolynomial& defect : {*this * adjoint() - one, adjoint() * *this - one})
    for (const auto& t : defect.terms())
      if (t.coeff.cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

TrigPolynomial& TrigPolynomial::operator+=(const TrigPolynomial& other) {
  if (N_ != other.N_ || n_ != other.n_) throw StructuralError("trig polynomial sizes differ");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize();
  return *this;
}

TrigPolynomial& TrigPolynomial::operator-=(const TrigPolynomial& other) {
  TrigPolynomial neg = other;
  neg *= Complex(-1.0, 0.0);
  return *this += neg;
}

TrigPolynomial& TrigPolynomial::operator*=(Complex s) {
  for (auto& t : terms_) t.coeff *= s;
  canonicalize();
  return *this;
}

TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b) {
  if (a.N_ != b.N_ || a.n_ != b.n_) throw StructuralError("trig polynomial sizes differ");
  std::vector<TrigPolynomial::Term> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) {
      FrequencyVector f;
      f.reserve(x.freq.size());
      for (std::size_t c = 0; c < x.freq.size(); ++c) f.push_back(x.freq[c] + y.freq[c]);
      out.push_back({std::move(f), x.coeff * y.coeff});
    }
  return TrigPolynomial(a.N_, a.n_, std::move(out));
}

nlohmann::json TrigPolynomial::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : terms_) {
    nlohmann::json freq = nlohmann::json::array();
    for (const auto& c : t.freq) freq.push_back(frequency_to_json(c));
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < t.coeff.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < t.coeff.cols(); ++c)
        row.push_back({t.coeff(r, c).real(), t.coeff(r, c).imag()});
      rows.push_back(row);
    }
    terms.push_back({{"freq", freq}, {"coeff", rows}});
  }
  return {{"N", N_}, {"n", n_}, {"terms", terms}};
}

TrigPolynomial TrigPolynomial::from_json(const nlohmann::json& j) {
  try {
    const int N = j.at("N").get<int>();
    const int n = j.at("n").get<int>();
    std::vector<Term> terms;
    for (const auto& t : j.at("terms")) {
      FrequencyVector f;
      for (const auto& c : t.at("freq")) f.push_back(frequency_from_json(c));
      const auto& rows = t.at("coeff");
      Matrix m(static_cast<Eigen::Index>(rows.size()),
               rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size()) throw StructuralError("ragged coefficient matrix");
        for (std::size_t c = 0; c < rows[r].size(); ++c)
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(rows[r][c]);
      }
      terms.push_back({std::move(f), std::move(m)});
    }
    return TrigPolynomial(N, n, std::move(terms));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed trig polynomial: ") + e.what());
  }
}

}  // namespace sfkit
