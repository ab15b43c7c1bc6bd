use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{MadsError, PollOrder};
use crate::switches::SwitchVector;

/// How a poll point was derived from the incumbent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PollDirection {
    /// `x_k + e_index` when `positive`, otherwise `x_k - e_index`.
    Axis { index: usize, positive: bool },
    /// Simultaneous flip of several coordinates (adaptive mesh only).
    Flip(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PollPoint {
    pub direction: PollDirection,
    /// Integer coordinates; may leave `{0,1}` for axis directions.
    pub point: Vec<i32>,
    pub valid: bool,
    pub discarded: bool,
}

impl PollPoint {
    fn from_coords(direction: PollDirection, point: Vec<i32>) -> Self {
        let valid = point.iter().all(|&c| c == 0 || c == 1);
        Self {
            direction,
            point,
            valid,
            discarded: !valid,
        }
    }

    /// The switch vector for a valid point.
    pub fn switch_vector(&self) -> Option<SwitchVector> {
        SwitchVector::from_coords(&self.point)
    }
}

/// Builds the poll set around `incumbent`.
///
/// Radius 1 yields the `2n` points `x_k ± e_i` in the order
/// `+e_1, -e_1, +e_2, -e_2, ...`, each flagged valid iff it stays inside the
/// unit hypercube. Larger radii (adaptive mesh) yield every vector at Hamming
/// distance exactly `radius`, all valid. `SeededRandom` permutes the list
/// with a generator keyed on `(seed, iteration)` only.
pub fn generate_poll_set(
    incumbent: &SwitchVector,
    order: PollOrder,
    seed: u64,
    iteration: u64,
    radius: usize,
) -> Result<Vec<PollPoint>, MadsError> {
    let n = incumbent.len();
    if radius == 0 || radius > n {
        return Err(MadsError::RadiusOutOfRange { radius, n });
    }
    let base = incumbent.to_coords();

    let mut points: Vec<PollPoint> = if radius == 1 {
        (0..n)
            .flat_map(|index| [true, false].map(|positive| (index, positive)))
            .map(|(index, positive)| {
                let mut point = base.clone();
                point[index] += if positive { 1 } else { -1 };
                PollPoint::from_coords(PollDirection::Axis { index, positive }, point)
            })
            .collect()
    } else {
        (0..n)
            .combinations(radius)
            .map(|flips| {
                let mut point = base.clone();
                for &i in &flips {
                    point[i] = 1 - point[i];
                }
                PollPoint::from_coords(PollDirection::Flip(flips), point)
            })
            .collect()
    };

    if order == PollOrder::SeededRandom {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Stream 0 is reserved for drawing starting points.
        rng.set_stream(iteration.wrapping_add(1));
        points.shuffle(&mut rng);
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(s: &str) -> SwitchVector {
        s.parse().unwrap()
    }

    #[test]
    fn reproduces_polling_point_table() {
        let points = generate_poll_set(&sv("010"), PollOrder::Lexicographic, 0, 0, 1).unwrap();
        let got: Vec<(Vec<i32>, bool, bool)> = points
            .iter()
            .map(|p| (p.point.clone(), p.valid, p.discarded))
            .collect();
        assert_eq!(
            got,
            vec![
                (vec![1, 1, 0], true, false),
                (vec![-1, 1, 0], false, true),
                (vec![0, 2, 0], false, true),
                (vec![0, 0, 0], true, false),
                (vec![0, 1, 1], true, false),
                (vec![0, 1, -1], false, true),
            ]
        );
    }

    #[test]
    fn all_ones_only_lowers() {
        let points = generate_poll_set(&sv("11111"), PollOrder::Lexicographic, 0, 0, 1).unwrap();
        assert_eq!(points.len(), 10);
        for p in &points {
            let PollDirection::Axis { positive, .. } = p.direction else {
                panic!("expected axis direction");
            };
            assert_eq!(p.valid, !positive);
        }
    }

    #[test]
    fn seeded_order_is_a_permutation() {
        let lex = generate_poll_set(&sv("010"), PollOrder::Lexicographic, 0, 0, 1).unwrap();
        let mut a = generate_poll_set(&sv("010"), PollOrder::SeededRandom, 1, 0, 1).unwrap();
        let b = generate_poll_set(&sv("010"), PollOrder::SeededRandom, 1, 0, 1).unwrap();
        assert_eq!(a, b);
        let mut c = generate_poll_set(&sv("010"), PollOrder::SeededRandom, 99, 0, 1).unwrap();
        let key = |p: &PollPoint| p.point.clone();
        a.sort_by_key(key);
        c.sort_by_key(key);
        let mut lex_sorted = lex.clone();
        lex_sorted.sort_by_key(key);
        assert_eq!(a, lex_sorted);
        assert_eq!(c, lex_sorted);
    }

    #[test]
    fn larger_radius_flips_exactly_r_bits() {
        let x = sv("01100");
        let points = generate_poll_set(&x, PollOrder::Lexicographic, 0, 0, 2).unwrap();
        assert_eq!(points.len(), 10);
        for p in &points {
            assert!(p.valid);
            assert_eq!(p.switch_vector().unwrap().hamming(&x), 2);
        }
    }

    #[test]
    fn radius_bounds() {
        assert!(matches!(
            generate_poll_set(&sv("01"), PollOrder::Lexicographic, 0, 0, 3),
            Err(MadsError::RadiusOutOfRange { radius: 3, n: 2 })
        ));
        assert!(generate_poll_set(&sv("01"), PollOrder::Lexicographic, 0, 0, 0).is_err());
    }
}
