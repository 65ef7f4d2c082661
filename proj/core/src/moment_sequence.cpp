#include "momentlab/moment_sequence.hpp"

#include <algorithm>

#include "momentlab/errors.hpp"

namespace momentlab {

namespace {

template <class T>
void zero_slot(std::vector<T>& values) {
  if (values.empty()) throw InputError("cumulant sequence must hold slot 0");
  values[0] = 0;
}

}  // namespace

ScalarSequence::ScalarSequence(std::vector<BigRational> values) : values_(std::move(values)) {
  for (auto& v : std::get<0>(values_)) v.canonicalize();
}

ScalarSequence::ScalarSequence(std::vector<Real> values, unsigned bits) : values_(std::move(values)), bits_(bits) {}

std::size_t ScalarSequence::size() const {
  return std::visit([](const auto& v) { return v.size(); }, values_);
}

const std::vector<BigRational>& ScalarSequence::exact_values() const {
  if (!is_exact()) throw BackendError("operation requires an exact (rational) sequence");
  return std::get<std::vector<BigRational>>(values_);
}

std::vector<Real> ScalarSequence::approx_values() const {
  if (!is_exact()) return std::get<std::vector<Real>>(values_);
  const auto& q = std::get<std::vector<BigRational>>(values_);
  std::vector<Real> out;
  out.reserve(q.size());
  for (const auto& v : q) out.push_back(to_real(v));
  return out;
}

MomentSequence MomentSequence::exact(std::vector<BigRational> values) {
  if (values.empty()) throw InputError("moment sequence is empty");
  MomentSequence m(std::move(values));
  if (m.exact_values()[0] != 1) throw InputError("moment sequence must start with mu_0 = 1");
  return m;
}

MomentSequence MomentSequence::approximate(std::vector<Real> values, unsigned precision_bits) {
  if (values.empty()) throw InputError("moment sequence is empty");
  if (precision_bits < 1) throw InputError("approximate sequence needs a precision");
  const Real tol = ldexp(Real(1), -static_cast<int>(precision_bits) + 4);
  if (abs(values[0] - 1) > tol) throw InputError("moment sequence must start with mu_0 = 1");
  values[0] = 1;
  return MomentSequence(std::move(values), precision_bits);
}

bool MomentSequence::all_positive() const {
  return std::visit([](const auto& v) { return std::all_of(v.begin(), v.end(), [](const auto& x) { return sign(x) > 0; }); },
                    values_);
}

MomentSequence MomentSequence::prefix(std::size_t upto) const {
  if (upto >= size()) throw InputError("prefix beyond the end of the sequence");
  if (is_exact()) {
    const auto& v = exact_values();
    return MomentSequence(std::vector<BigRational>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(upto) + 1));
  }
  const auto& v = std::get<std::vector<Real>>(values_);
  return MomentSequence(std::vector<Real>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(upto) + 1), bits_);
}

bool operator==(const MomentSequence& a, const MomentSequence& b) { return a.values_ == b.values_ && a.bits_ == b.bits_; }

CumulantSequence CumulantSequence::exact(std::vector<BigRational> values) {
  zero_slot(values);
  return CumulantSequence(std::move(values));
}

CumulantSequence CumulantSequence::approximate(std::vector<Real> values, unsigned precision_bits) {
  zero_slot(values);
  return CumulantSequence(std::move(values), precision_bits);
}

BooleanCumulantSequence BooleanCumulantSequence::exact(std::vector<BigRational> values) {
  zero_slot(values);
  return BooleanCumulantSequence(std::move(values));
}

BooleanCumulantSequence BooleanCumulantSequence::approximate(std::vector<Real> values, unsigned precision_bits) {
  zero_slot(values);
  return BooleanCumulantSequence(std::move(values), precision_bits);
}

}  // namespace momentlab
