#ifndef TALBOT_OPTICS_HPP
#define TALBOT_OPTICS_HPP

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "talbot/beam.hpp"
#include "talbot/types.hpp"

namespace talbot {

using cplx = std::complex<double>;

/// Truncation error of the harmonic expansion; callers may retry with a
/// larger harmonic count.
class TruncationError : public NumericsError {
public:
    explicit TruncationError(const std::string& what) : NumericsError(what) {}
};

/// Complex amplitude-transmission Fourier coefficients b_j, j in [-J, J].
struct GratingCoefficients {
    int truncation = 0;
    std::vector<cplx> b; // index j + truncation

    cplx coeff(int j) const {
        if (j < -truncation || j > truncation) return {0.0, 0.0};
        return b[static_cast<std::size_t>(j + truncation)];
    }
    double power_sum() const; // sum |b_j|^2
};

/// Fourier coefficients of the detected signal versus third-grating offset.
/// Stores m = 0..M; negative harmonics follow from hermiticity c_{-m} = conj(c_m).
struct FringePattern {
    double period = 0.0;
    std::vector<cplx> c; // index m, c[0] real > 0

    int harmonics() const { return static_cast<int>(c.size()) - 1; }
    cplx coeff(int m) const;
    double visibility() const; // 2 |c_1| / c_0
    double phase() const;      // arg c_1
    double value_at(double offset) const; // real signal, units of c_0
    FringePattern normalized() const;     // c_0 = 1 convention
    void apply(const struct ChannelReduction& r);
};

/// Per-harmonic complex multipliers emitted by one physics channel:
/// magnitude = visibility loss, argument = fringe shift. r_0 = 1 always;
/// count-rate renormalization is reported separately by the channel.
struct ChannelReduction {
    std::string label;
    std::vector<cplx> r; // index m = 0..M

    cplx coeff(int m) const;
    static ChannelReduction make(std::string label, std::vector<cplx> r);
};

using ChannelBuilder = std::function<ChannelReduction(double v, int harmonics)>;

/// Casimir-Polder phase accumulated on a straight path through a material
/// slit, at relative position xi in (-1, 1). Attractive potential advances
/// the phase (positive sign).
double slit_phase_profile(const Grating& g, const MoleculeSpecies& mol, double v, double xi);

/// b_j of a material grating via Gauss-Legendre quadrature over the open
/// slit, with node doubling until the coefficients settle to 1e-8. With
/// c3 = 0 this reduces to the closed form f sinc(pi j f). With c3 > 0 the
/// region closer than wall_cutoff to either wall counts as absorbed.
GratingCoefficients material_grating_coefficients(const Grating& g, const MoleculeSpecies& mol,
                                                  double v, int truncation);

/// b_j = exp(i phi0/2) i^j J_j(phi0/2) of the sinusoidal phase grating
/// t(x) = exp(i phi0 cos^2(pi x / d)).
GratingCoefficients optical_grating_coefficients(const Grating& g, int truncation);

GratingCoefficients grating_coefficients(const Grating& g, const MoleculeSpecies& mol,
                                         double v, int truncation);

/// Fourier coefficients A_m of the intensity transmission |t(x)|^2, m = 0..M.
/// Material gratings: closed-form slit coefficients; optical phase gratings
/// transmit uniformly (A_0 = 1, rest 0).
std::vector<double> intensity_coefficients(const Grating& g, int max_harmonic);

/// Talbot-Lau coefficient B_mu(xi) = sum_j b_j conj(b_{j-mu}) exp(i pi (mu - 2 j) xi).
cplx talbot_coefficient(const GratingCoefficients& b, int mu, double xi);

double talbot_length(double period, double lambda_db);

/// Detected-signal coefficients of the symmetric three-grating interferometer:
///   c_m = conj(A1_m) B_{2m}(m L / L_T) conj(A3_m) prod_channels r_m exp(i m dphi_geo)
/// with dphi_geo = (x1 - 2 x2 + x3) 2 pi / d. The truncation check
/// |c_M| <= tail_tol |c_1| runs on the bare optics coefficients, before the
/// channel multipliers are applied.
FringePattern fringe_coefficients(const InterferometerConfig& cfg, const MoleculeSpecies& mol,
                                  double v, const std::vector<ChannelReduction>& reductions,
                                  int harmonics, double tail_tol = 1e-6);

/// Weighted incoherent average over a velocity sample; channels are rebuilt
/// per velocity. Reductions in `post` are applied once after averaging
/// (lumped channels); a label collision between `builders` and `post` is a
/// double-counting error.
FringePattern velocity_averaged_pattern(const InterferometerConfig& cfg,
                                        const MoleculeSpecies& mol,
                                        const VelocitySample& sample,
                                        const std::vector<ChannelBuilder>& builders,
                                        int harmonics,
                                        const std::vector<ChannelReduction>& post = {},
                                        double tail_tol = 1e-6);

} // namespace talbot

#endif
