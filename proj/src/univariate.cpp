#include <websmith/univariate.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>

namespace websmith {

namespace {

std::string strip(const std::string& s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    return out;
}

double parse_real(const std::string& s, const std::string& context) {
    if (s.empty()) throw DomainError("empty number in '" + context + "'");
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw DomainError("bad number '" + s + "' in '" + context + "'");
    }
    if (used != s.size()) throw DomainError("bad number '" + s + "' in '" + context + "'");
    return v;
}

// Position of the last top-level sign that splits "a+bi" (not an exponent sign).
std::size_t split_sign(const std::string& s) {
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') return i;
    }
    return std::string::npos;
}

// "3t^2+1", "x^3-2x", "3y^2" -> coefficients by degree.
std::vector<cplx> parse_polynomial(const std::string& text) {
    std::vector<std::string> terms;
    std::string cur;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if ((c == '+' || c == '-') && i > 0 && text[i - 1] != 'e' && text[i - 1] != 'E' && text[i - 1] != '^') {
            terms.push_back(cur);
            cur.clear();
        }
        cur.push_back(c);
    }
    terms.push_back(cur);

    std::vector<cplx> coeffs;
    for (std::string t : terms) {
        if (t.empty()) continue;
        const std::size_t v = t.find_first_of("xyt");
        int degree = 0;
        std::string coef = t;
        if (v != std::string::npos) {
            coef = t.substr(0, v);
            const std::string rest = t.substr(v + 1);
            if (rest.empty()) {
                degree = 1;
            } else if (rest[0] == '^') {
                degree = static_cast<int>(parse_real(rest.substr(1), text));
            } else {
                throw DomainError("bad polynomial term '" + t + "'");
            }
            if (!coef.empty() && coef.back() == '*') coef.pop_back();
            if (coef.empty() || coef == "+") coef = "1";
            if (coef == "-") coef = "-1";
        }
        if (degree < 0) throw DomainError("negative degree in '" + text + "'");
        if (static_cast<int>(coeffs.size()) <= degree) coeffs.resize(static_cast<std::size_t>(degree + 1));
        coeffs[static_cast<std::size_t>(degree)] += parse_complex(coef);
    }
    if (coeffs.empty()) throw DomainError("empty polynomial");
    return coeffs;
}

const std::vector<std::string>& known_names() {
    static const std::vector<std::string> names{"const", "poly", "exp",   "sin", "cos", "sinh", "cosh", "tanh", "sech",
                                                "csch",  "recip", "sn",   "cn",  "dn",  "snt",  "dnkcn"};
    return names;
}

bool needs_modulus(const std::string& n) { return n == "sn" || n == "cn" || n == "dn" || n == "snt" || n == "dnkcn"; }

}  // namespace

cplx parse_complex(const std::string& raw) {
    const std::string s = strip(raw);
    if (s.empty()) throw DomainError("empty complex literal");
    if (s.back() != 'i') return parse_real(s, raw);
    const std::string body = s.substr(0, s.size() - 1);
    auto imag_of = [&](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return parse_real(t, raw);
    };
    const std::size_t pos = split_sign(body);
    if (pos == std::string::npos) return {0.0, imag_of(body)};
    return {parse_real(body.substr(0, pos), raw), imag_of(body.substr(pos))};
}

std::string format_complex(cplx z) {
    char buf[96];
    if (z.imag() == 0.0) {
        std::snprintf(buf, sizeof buf, "%.17g", z.real());
    } else {
        std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    }
    return buf;
}

Univariate Univariate::parse(const std::string& raw) {
    Univariate u;
    std::string s = strip(raw);
    u.text_ = s;
    if (s.empty()) throw DomainError("empty function spec");

    if (const std::size_t at = s.find('@'); at != std::string::npos) {
        u.rate_ = parse_complex(s.substr(at + 1));
        s = s.substr(0, at);
        if (u.rate_ == cplx{}) throw DomainError("zero rate in '" + raw + "'");
    }
    if (const std::size_t star = s.find('*'); star != std::string::npos && s.find(':') > star) {
        u.scale_ = parse_complex(s.substr(0, star));
        s = s.substr(star + 1);
    } else if (s.size() > 1 && s[0] == '-' && std::isalpha(static_cast<unsigned char>(s[1]))) {
        u.scale_ = -1.0;
        s = s.substr(1);
    }
    std::string params;
    if (const std::size_t colon = s.find(':'); colon != std::string::npos) {
        params = s.substr(colon + 1);
        s = s.substr(0, colon);
    }
    u.name_ = s;
    const auto& names = known_names();
    if (std::find(names.begin(), names.end(), u.name_) == names.end())
        throw DomainError("unknown function '" + u.name_ + "'");

    if (u.name_ == "poly") {
        if (params.empty()) throw DomainError("poly needs coefficients");
        if (params.find_first_of("xyt") != std::string::npos) {
            u.params_ = parse_polynomial(params);
        } else {
            std::size_t start = 0;
            while (start <= params.size()) {
                const std::size_t comma = params.find(',', start);
                u.params_.push_back(parse_complex(params.substr(start, comma - start)));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
        }
    } else if (!params.empty()) {
        u.params_.push_back(parse_complex(params));
    }

    if (needs_modulus(u.name_)) {
        if (u.params_.size() != 1) throw DomainError("'" + u.name_ + "' needs one parameter");
        u.ctx_ = std::make_shared<const EllipticContext>(u.name_ == "snt" ? context_from_tau(u.params_[0])
                                                                            : context_from_k(u.params_[0]));
    }
    if (u.name_ == "const" && !u.params_.empty()) u.scale_ *= u.params_[0];
    return u;
}

bool Univariate::has_primitive() const noexcept { return name_ != "dnkcn"; }

Series1 Univariate::base_series(cplx s, int m) const {
    if (name_ == "const") return Series1::constant(s, m, 1.0);
    if (name_ == "poly") {
        const Series1 id = Series1::identity(s, m);
        Series1 r = Series1::constant(s, m, params_.back());
        for (std::size_t i = params_.size() - 1; i-- > 0;) r = r * id + Series1::constant(s, m, params_[i]);
        return r;
    }
    if (name_ == "exp") return series::exp(s, m);
    if (name_ == "sin") return series::sin(s, m);
    if (name_ == "cos") return series::cos(s, m);
    if (name_ == "sinh") return series::sinh(s, m);
    if (name_ == "cosh") return series::cosh(s, m);
    if (name_ == "tanh") return series::tanh(s, m);
    if (name_ == "sech") return Series1::constant(s, m, 1.0) / series::cosh(s, m);
    if (name_ == "csch") return Series1::constant(s, m, 1.0) / series::sinh(s, m);
    if (name_ == "recip") return series::reciprocal(s, m);
    if (name_ == "sn" || name_ == "snt") return jacobi_jet(JacobiKind::sn, s, *ctx_, m);
    if (name_ == "cn") return jacobi_jet(JacobiKind::cn, s, *ctx_, m);
    if (name_ == "dn") return jacobi_jet(JacobiKind::dn, s, *ctx_, m);
    if (name_ == "dnkcn") return jacobi_jet(JacobiKind::dn, s, *ctx_, m) - ctx_->k() * jacobi_jet(JacobiKind::cn, s, *ctx_, m);
    throw DomainError("unknown function '" + name_ + "'");
}

cplx Univariate::base_primitive(cplx s) const {
    if (name_ == "const") return s;
    if (name_ == "poly") {
        cplx r = 0.0;
        for (std::size_t i = params_.size(); i-- > 0;) r = r * s + params_[i] / static_cast<double>(i + 1);
        return r * s;
    }
    if (name_ == "exp") return std::exp(s);
    if (name_ == "sin") return -std::cos(s);
    if (name_ == "cos") return std::sin(s);
    if (name_ == "sinh") return std::cosh(s);
    if (name_ == "cosh") return std::sinh(s);
    if (name_ == "tanh") return std::log(std::cosh(s));
    if (name_ == "sech") return 2.0 * std::atan(std::tanh(0.5 * s));
    if (name_ == "csch") return std::log(std::tanh(0.5 * s));
    if (name_ == "recip") return std::log(s);
    if (name_ == "sn" || name_ == "snt") {
        const cplx k = ctx_->k();
        return std::log(dn(s, *ctx_) - k * cn(s, *ctx_)) / k;
    }
    if (name_ == "cn") {
        const cplx k = ctx_->k();
        return std::asin(k * sn(s, *ctx_)) / k;
    }
    if (name_ == "dn") return std::asin(sn(s, *ctx_));
    throw DomainError("no closed-form primitive for '" + name_ + "'");
}

cplx Univariate::value(cplx t) const { return base_series(rate_ * t, 0)[0] * scale_; }

Series1 Univariate::series(cplx t, int order) const {
    const Series1 b = base_series(rate_ * t, order);
    std::vector<cplx> c(static_cast<std::size_t>(order + 1));
    cplx an = 1.0;
    for (int n = 0; n <= order; ++n) {
        c[static_cast<std::size_t>(n)] = scale_ * b[n] * an;
        an *= rate_;
    }
    return Series1(t, std::move(c));
}

cplx Univariate::primitive_value(cplx t) const { return scale_ * base_primitive(rate_ * t) / rate_; }

Series1 Univariate::primitive_series(cplx t, int order) const {
    if (order < 1) return Series1::constant(t, 0, primitive_value(t));
    return series(t, order - 1).integral(primitive_value(t));
}

}  // namespace websmith
