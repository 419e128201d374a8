//! Two-mode linear optics: beam splitters, EPR correlations, sideband
//! separation and Bogoliubov channels with their noise figures.

mod beam_splitter;
mod bogoliubov;
mod epr;
mod sidebands;
mod time_reverse;
mod two_mode;

pub use beam_splitter::{
    apply_beam_splitter, make_beam_splitter, BeamSplitter, BeamSplitterKind, StokesResiduals,
};
pub use bogoliubov::{
    apply_channel, apply_channel_to_mode, apply_two_mode_map, beam_splitter_map, make_channel,
    noise_figure, noise_figure_numeric, BogoliubovMap, ChannelKind, Coefficients,
};
pub use epr::{epr_commutator_check, epr_pair, epr_variances, EprCommutatorReport};
pub use sidebands::{
    sideband_state, solve_arm_length, unbalanced_interferometer, InterferometerReport,
    SidebandState, PHASE_TOLERANCE, SPEED_OF_LIGHT,
};
pub use time_reverse::TimeReverse;
pub use two_mode::TwoModeGaussianState;
