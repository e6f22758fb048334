use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Counter-mode generator for one trajectory (or other Monte Carlo unit):
/// the run seed picks the key, the unit index picks the stream. Streams
/// never overlap, so trajectories can be computed in any order or in
/// parallel and still draw identical numbers.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
