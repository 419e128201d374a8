//! Desk-scale quantum optics: classical laser-noise spectra, single-mode
//! phase-space states, detection simulation, operator-ordering calculus and
//! two-mode Bogoliubov optics.
//!
//! Quadrature convention used throughout: `X = (a + a†)/2`, `P = (a - a†)/2i`,
//! `[X, P] = i/2`, vacuum variance `1/4`. Phase-space densities are normalized
//! over `dX dP`.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod detection;
pub mod error;
pub mod io;
pub mod multimode;
pub mod numeric;
pub mod ordering;
pub mod phase_space;
pub mod rng;
pub mod spectra;

pub use error::{Error, Result};

pub use detection::{
    reconstruct_wigner, sample_direct, sample_heterodyne, sample_homodyne, QuadratureSamples,
    Reconstruction, ReconstructionConfig, TomographyDataset,
};
pub use multimode::{
    apply_beam_splitter, apply_channel, apply_channel_to_mode, epr_commutator_check,
    make_beam_splitter, make_channel, noise_figure, noise_figure_numeric, sideband_state,
    solve_arm_length, unbalanced_interferometer, BeamSplitter, BeamSplitterKind, BogoliubovMap,
    ChannelKind, TimeReverse, TwoModeGaussianState,
};
pub use ordering::{
    g2_zero, g2_zero_fock, ordering_energy_table, sym_moments_gaussian, OrderingMoments,
};
pub use phase_space::{
    displace, gaussian_p_function, make_state, marginal, parity_wigner_origin, photon_distribution,
    to_husimi, wigner, wigner_point, Axis, FockVector, GaussianState, Marginal, PFunction,
    PhotonDistribution, State, StateSpec, WignerGrid,
};
pub use spectra::{
    absorption_rate, amplitude_corr_from_intensity, coherence_factor, correlation, field_spectrum,
    gaussian_even_moment, lineshape_from_noise, periodogram, spectral_density, synthesize_field,
    white_fm_linewidth, ComplexTimeSeries, CorrelationFunction, CorrelationKind, NoiseModel,
    SpectralDensity, SpectralKind,
};
