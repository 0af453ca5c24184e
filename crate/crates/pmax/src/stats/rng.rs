use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// A seedable, splittable random stream.
///
/// `seed` selects the experiment, `stream_id` the replicate. The generator is
/// ChaCha12: `seed` keys the cipher, `stream_id` selects a disjoint counter
/// stream, so distinct ids share no internal state and identical
/// `(seed, stream_id)` pairs reproduce bit-identical sequences across runs
/// and platforms.
///
/// A stream is single-owner: materialize it with [`RngStream::rng`] and hand
/// the resulting generator to exactly one consumer. Distinct streams may be
/// used in parallel freely.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Materialize the generator for this stream.
    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Uniform draw on the open interval (0, 1).
///
/// Draws are clamped one ulp away from {0, 1} so that downstream log
/// transforms never see an endpoint.
pub fn uniform_open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    const LO: f64 = f64::MIN_POSITIVE;
    const HI: f64 = 1.0 - f64::EPSILON / 2.0;
    rng.random::<f64>().clamp(LO, HI)
}
