//! Classical field noise: synthesis, spectral densities, correlation
//! functions, lineshapes and absorption rates.

mod absorption;
mod estimate;
mod lineshape;
mod series;
mod synth;

pub use absorption::absorption_rate;
pub use estimate::{
    amplitude_corr_from_intensity, correlation, field_spectrum, periodogram, spectral_density,
};
pub use lineshape::{
    coherence_factor, fit_lorentzian, gaussian_even_moment, lineshape_from_noise,
    white_fm_linewidth, white_fm_lorentzian, LorentzianFit, WhiteFmLinewidth,
};
pub use series::{
    ComplexTimeSeries, CorrelationFunction, CorrelationKind, SpectralDensity, SpectralKind,
};
pub use synth::{synthesize_field, synthesize_member, NoiseModel};
