#include "ynet/frames.hpp"

#include <cmath>

namespace ynet {

double OperatingPoint::vmag() const { return std::hypot(Vx, Vy); }

std::string to_string(FrameKind k) {
    switch (k) {
        case FrameKind::system: return "system";
        case FrameKind::local: return "local";
        case FrameKind::static_: return "static";
        case FrameKind::alphabeta: return "alphabeta";
    }
    return "?";
}

namespace frames {

Eigen::Matrix2d rotation(double dtheta) {
    Eigen::Matrix2d t;
    const double c = std::cos(dtheta), s = std::sin(dtheta);
    t << c, s, -s, c;
    return t;
}

AdmittanceBlock rotate_admittance(const AdmittanceBlock& block, const FrameTag& to) {
    if (block.frame.kind == FrameKind::static_ || block.frame.kind == FrameKind::alphabeta)
        throw InvalidArgument("cannot rotate a " + to_string(block.frame.kind) +
                              "-frame block; only rotating dq frames rotate");
    if (to.kind == FrameKind::static_ || to.kind == FrameKind::alphabeta)
        throw InvalidArgument("rotation target must be a rotating dq frame");
    if (block.tf.rows() != 2 || block.tf.cols() != 2)
        throw InvalidArgument("rotate_admittance expects a 2x2 dq block");

    const double dth = to.angle - block.frame.angle;
    const Eigen::Matrix2d t = rotation(dth);
    const Eigen::MatrixXcd tc = t.cast<cdouble>();
    const Eigen::MatrixXcd tinv = t.transpose().cast<cdouble>();

    AdmittanceBlock out = block;
    out.tf = tc * block.tf * tinv;
    out.frame = to;
    return out;
}

ReImParts split_re_im(const RationalFunction& f) {
    const Polynomial dbar = f.den().conjugated();
    Polynomial num = f.num() * dbar;   // complex coefficients
    Polynomial den = f.den() * dbar;   // conjugate-symmetric product: real coefficients

    std::vector<cdouble> dre(den.coeffs().size());
    for (std::size_t k = 0; k < dre.size(); ++k) dre[k] = cdouble(den.coeffs()[k].real(), 0.0);
    Polynomial den_real(std::move(dre));

    std::vector<cdouble> nre(num.coeffs().size()), nim(num.coeffs().size());
    for (std::size_t k = 0; k < nre.size(); ++k) {
        nre[k] = cdouble(num.coeffs()[k].real(), 0.0);
        nim[k] = cdouble(num.coeffs()[k].imag(), 0.0);
    }
    return {RationalFunction(Polynomial(std::move(nre)), den_real),
            RationalFunction(Polynomial(std::move(nim)), den_real)};
}

TFMatrix static_to_alphabeta(const RationalFunction& f) {
    const ReImParts p = split_re_im(f);
    TFMatrix m(2, 2);
    m(0, 0) = p.re;
    m(0, 1) = -p.im;
    m(1, 0) = p.im;
    m(1, 1) = p.re;
    return m;
}

TFMatrix static_to_dq(const RationalFunction& f, double omega0) {
    return static_to_alphabeta(f.shifted(cdouble(0.0, omega0)));
}

}  // namespace frames
}  // namespace ynet
