#pragma once

// Univariate building blocks for separable defining functions.
//
// Textual form:  [-][c*]name[:params][@a]   meaning  c * f(a t)
//
//   const            1                 poly:3t^2+1     polynomial
//   exp sin cos      sinh cosh tanh    sech csch recip
//   sn:k cn:k dn:k   Jacobi functions of modulus k (complex literals allowed)
//   snt:tau          sn with the modulus given by its nome parameter
//   dnkcn:k          dn_k t - k cn_k t
//
// A Univariate knows its Taylor series and, for most names, a closed-form
// primitive, so it can serve either as a slope v_x or as v itself.

#include <websmith/special.hpp>

#include <memory>
#include <string>
#include <vector>

namespace websmith {

/// Parse "1.5", "-2", "0.3+0.2i", "-i", "2.5e-3i".
cplx parse_complex(const std::string& text);
std::string format_complex(cplx z);

class Univariate {
public:
    static Univariate parse(const std::string& text);

    const std::string& text() const noexcept { return text_; }
    const std::string& name() const noexcept { return name_; }
    bool is_constant() const noexcept { return name_ == "const"; }
    bool has_primitive() const noexcept;

    cplx value(cplx t) const;
    /// Taylor series of c f(a t) at t.
    Series1 series(cplx t, int order) const;
    /// Value of the closed-form primitive c F(a t) / a.
    cplx primitive_value(cplx t) const;
    /// Taylor series of the primitive at t; order >= 1.
    Series1 primitive_series(cplx t, int order) const;

private:
    Series1 base_series(cplx s, int order) const;
    cplx base_primitive(cplx s) const;

    std::string text_;
    std::string name_;
    cplx scale_{1.0};
    cplx rate_{1.0};
    std::vector<cplx> params_;
    std::shared_ptr<const EllipticContext> ctx_;
};

}  // namespace websmith
