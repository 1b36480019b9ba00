use crate::error::{Error, Result};
use crate::types::VectorItem;

/// Unit vector orthogonal to the current signed sum `d_vec`.
///
/// Rotates the plane spanned by the two largest-magnitude coordinates
/// `(i, j)`: the answer is `(−d_j e_i + d_i e_j) / ‖(d_i, d_j)‖`. Returns
/// `e₁` at the origin. Whatever sign the algorithm picks,
/// `‖d + χ u‖₂² = ‖d‖₂² + 1`.
pub fn orthogonal_adversary(d_vec: &[f64]) -> Result<VectorItem> {
    let d = d_vec.len();
    if d < 2 {
        return Err(Error::param("the orthogonal adversary needs d >= 2"));
    }
    let mut order: Vec<usize> = (0..d).collect();
    // stable: ties keep the lower index first
    order.sort_by(|&a, &b| d_vec[b].abs().total_cmp(&d_vec[a].abs()));
    let (i, j) = (order[0], order[1]);
    let mut coords = vec![0.0; d];
    if d_vec[i] == 0.0 {
        coords[0] = 1.0;
    } else {
        let norm = d_vec[i].hypot(d_vec[j]);
        coords[i] = -d_vec[j] / norm;
        coords[j] = d_vec[i] / norm;
    }
    VectorItem::new(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balancers::{BalancerState, SigningRule};
    use crate::rng::RngSeed;

    #[test]
    fn origin_gives_first_axis() {
        assert_eq!(orthogonal_adversary(&[0.0, 0.0, 0.0]).unwrap().coords(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn rotates_single_axis() {
        let u = orthogonal_adversary(&[1.0, 0.0]).unwrap();
        assert_eq!(u.coords(), &[0.0, 1.0]);
    }

    #[test]
    fn rejects_one_dimension() {
        assert!(orthogonal_adversary(&[1.0]).is_err());
    }

    #[test]
    fn squared_norm_grows_by_one_per_step() {
        for rule in [SigningRule::Greedy, SigningRule::Random, SigningRule::SelfBalancing] {
            let mut state = BalancerState::new(4, 5.0).unwrap();
            let mut rng = RngSeed::new(17, 0).rng();
            for t in 1..=2_000usize {
                let u = orthogonal_adversary(state.d_vec()).unwrap();
                assert!(u.dot(state.d_vec()).abs() < 1e-9);
                assert!((u.norm2() - 1.0).abs() < 1e-12);
                rule.sign(&mut state, &u, &mut rng).unwrap();
                let sq: f64 = state.d_vec().iter().map(|x| x * x).sum();
                assert!((sq - t as f64).abs() <= 1e-6 * t as f64, "{rule:?} t={t}: {sq}");
            }
        }
    }
}
