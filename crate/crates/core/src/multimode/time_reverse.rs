use crate::multimode::bogoliubov::BogoliubovMap;
use crate::spectra::ComplexTimeSeries;

/// Time reversal, which acts on complex amplitudes as phase conjugation.
/// Applying it twice is the identity.
pub trait TimeReverse {
    fn time_reverse(&self) -> Self;
}

impl TimeReverse for ComplexTimeSeries {
    /// `E(t) → E*(-t)` on the same time grid.
    ///
    /// The sample at `t_n` is taken from the sample at `-t_n`, with indices
    /// reflected modulo the record length. For a grid symmetric about
    /// `t = 0` this is the exact mirror image, and in every case the DFT of
    /// the result is the complex conjugate of the original DFT.
    fn time_reverse(&self) -> Self {
        let x = self.samples();
        let n = x.len() as i64;
        let shift = (-2.0 * self.t0() / self.dt()).round() as i64;
        let samples = (0..n)
            .map(|k| x[(shift - k).rem_euclid(n) as usize].conj())
            .collect();
        ComplexTimeSeries::with_start(samples, self.dt(), self.t0(), self.carrier_freq())
            .expect("reversal keeps a valid grid")
    }
}

impl TimeReverse for BogoliubovMap {
    /// Conjugates every coefficient, which preserves the commutator
    /// conditions.
    fn time_reverse(&self) -> Self {
        self.conjugated()
    }
}
