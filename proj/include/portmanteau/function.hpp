#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "portmanteau/error.hpp"
#include "portmanteau/point.hpp"
#include "portmanteau/scalar.hpp"

namespace portmanteau {

/// Function classes used as test families:
///   C       bounded continuous
///   C_x0    bounded continuous, vanishing on a neighbourhood of x0
///   BL_x0   bounded Lipschitz, vanishing on a neighbourhood of x0
///   C_x0_u  uniformly continuous members of C_x0
///   C2      (real line) C_x0 with a limit at infinity
enum class FunctionClass { C, C_x0, BL_x0, C_x0_u, C2 };

constexpr const char* to_string(FunctionClass c) noexcept {
  switch (c) {
    case FunctionClass::C: return "C";
    case FunctionClass::C_x0: return "C_x0";
    case FunctionClass::BL_x0: return "BL_x0";
    case FunctionClass::C_x0_u: return "C_x0_u";
    case FunctionClass::C2: return "C2";
  }
  return "?";
}

template <class Real>
struct FunctionMetadata {
  std::string name;
  Point<Real> center;     // the distinguished point x0
  Real bound;             // |f| <= bound everywhere
  Real vanish_radius;     // f = 0 on d(x, x0) < vanish_radius; 0 if not certified
  std::optional<Real> lipschitz;
  FunctionClass tag = FunctionClass::C;
  std::optional<Real> limit_at_infinity;
};

template <class Real>
class TestFunction {
 public:
  using Evaluator = std::function<Real(const Point<Real>&)>;

  TestFunction(Evaluator eval, FunctionMetadata<Real> meta) : eval_(std::move(eval)), meta_(std::move(meta)) {
    const Real zero(0);
    if (!eval_) throw Error(ErrorCode::InvalidArgument, "test function without evaluator");
    if (!(zero < meta_.bound)) throw Error(ErrorCode::InvalidArgument, meta_.name + ": bound must be positive");
    if (meta_.vanish_radius < zero) throw Error(ErrorCode::InvalidArgument, meta_.name + ": negative vanish radius");
    if (meta_.lipschitz && !(zero < *meta_.lipschitz))
      throw Error(ErrorCode::InvalidArgument, meta_.name + ": Lipschitz constant must be positive");
    const bool vanishes = zero < meta_.vanish_radius;
    switch (meta_.tag) {
      case FunctionClass::C: break;
      case FunctionClass::C_x0:
      case FunctionClass::C_x0_u:
        if (!vanishes) throw Error(ErrorCode::InvalidArgument, meta_.name + ": class requires a vanish radius");
        break;
      case FunctionClass::BL_x0:
        if (!vanishes || !meta_.lipschitz)
          throw Error(ErrorCode::InvalidArgument, meta_.name + ": BL_x0 requires a vanish radius and a Lipschitz constant");
        break;
      case FunctionClass::C2:
        if (!vanishes || !meta_.limit_at_infinity)
          throw Error(ErrorCode::InvalidArgument, meta_.name + ": C2 requires a vanish radius and a limit at infinity");
        break;
    }
  }

  Real operator()(const Point<Real>& x) const { return eval_(x); }

  const std::string& name() const noexcept { return meta_.name; }
  const Point<Real>& center() const noexcept { return meta_.center; }
  const Real& bound() const noexcept { return meta_.bound; }
  const Real& vanish_radius() const noexcept { return meta_.vanish_radius; }
  const std::optional<Real>& lipschitz() const noexcept { return meta_.lipschitz; }
  FunctionClass tag() const noexcept { return meta_.tag; }
  const std::optional<Real>& limit_at_infinity() const noexcept { return meta_.limit_at_infinity; }
  const FunctionMetadata<Real>& metadata() const noexcept { return meta_; }

  bool vanishes_near_center() const { return Real(0) < meta_.vanish_radius; }
  bool is_bounded_lipschitz() const { return vanishes_near_center() && meta_.lipschitz.has_value(); }

 private:
  Evaluator eval_;
  FunctionMetadata<Real> meta_;
};

}  // namespace portmanteau
