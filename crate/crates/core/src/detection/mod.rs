//! Simulated photodetection: photon counting, balanced homodyne and
//! heterodyne sampling, and Wigner reconstruction by filtered back-projection.

mod sampling;
mod tomography;

pub use sampling::{
    pair_covariance, sample_direct, sample_heterodyne, sample_homodyne, sample_homodyne_scan,
    QuadratureSamples,
};
pub use tomography::{
    reconstruct_wigner, Band, Reconstruction, ReconstructionConfig, TomographyDataset,
    DEFAULT_OVERSAMPLING, DEFAULT_SNR, MIN_ANGLES, MIN_SAMPLES_PER_ANGLE,
};
