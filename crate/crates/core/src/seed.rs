//! Seed derivation and small parallel helpers shared by the experiment code.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a base seed with a sequence of tags into an independent stream seed.
pub fn derive(base: u64, tags: &[u64]) -> u64 {
    tags.iter().fold(splitmix64(base), |acc, &t| {
        splitmix64(acc ^ splitmix64(t.wrapping_add(0x1234_5678)))
    })
}

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Ordered parallel map over `items` with at most `workers` threads.
///
/// Results come back in input order regardless of scheduling.
pub fn par_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = workers.max(1).min(items.len().max(1));
    if workers == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                s.spawn(move || part.iter().map(f).collect::<Vec<R>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_separates_tags() {
        let a = derive(7, &[0, 1]);
        let b = derive(7, &[1, 0]);
        let c = derive(7, &[0, 1]);
        assert_ne!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn par_map_keeps_order() {
        let xs: Vec<u64> = (0..37).collect();
        let serial: Vec<u64> = xs.iter().map(|x| x * x).collect();
        assert_eq!(par_map(&xs, 4, |x| x * x), serial);
    }
}
