//! Exhaustive selection oracle on tiny trees.
//!
//! Each non-root node `u` hangs below `parents[u − 1]` via an edge carrying
//! a finite set `S_e` of vectors. A selection picks one vector per edge; its
//! value is the largest `ℓ∞` norm of a root-to-node prefix sum.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ProbeReport;
use crate::error::{Error, Result};
use crate::rng::RngSeed;
use crate::types::{norm_inf, NORM_TOLERANCE};

/// Upper limit on `Π |S_e|`.
pub const MAX_SELECTIONS: u64 = 1_000_000;

const HULL_TOLERANCE: f64 = 1e-9;

/// One chosen index per edge.
pub type Selection = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionTree {
    /// `parents[e]` is the parent of node `e + 1`; always `≤ e`.
    pub parents: Vec<usize>,
    /// `sets[e]` is the vector set on the edge into node `e + 1`.
    pub sets: Vec<Vec<Vec<f64>>>,
    pub d: usize,
}

impl SelectionTree {
    pub fn edges(&self) -> usize {
        self.parents.len()
    }

    pub fn depth(&self) -> usize {
        let mut depth = vec![0usize; self.edges() + 1];
        for (e, &p) in self.parents.iter().enumerate() {
            depth[e + 1] = depth[p] + 1;
        }
        depth.into_iter().max().unwrap_or(0)
    }

    pub fn selection_count(&self) -> u64 {
        self.sets
            .iter()
            .fold(1u64, |acc, s| acc.saturating_mul(s.len() as u64))
    }

    fn validate(&self) -> Result<()> {
        if self.sets.len() != self.parents.len() {
            return Err(Error::param("one vector set per edge required"));
        }
        for (e, &p) in self.parents.iter().enumerate() {
            if p > e {
                return Err(Error::param(format!("parent {p} of node {} is not earlier", e + 1)));
            }
        }
        if self.selection_count() > MAX_SELECTIONS {
            return Err(Error::param(format!(
                "{} selections exceed the limit {MAX_SELECTIONS}",
                self.selection_count()
            )));
        }
        for set in &self.sets {
            if set.is_empty() {
                return Err(Error::param("empty vector set"));
            }
            for v in set {
                if v.len() != self.d {
                    return Err(Error::DimensionMismatch {
                        expected: self.d,
                        got: v.len(),
                    });
                }
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm > 1.0 + NORM_TOLERANCE {
                    return Err(Error::NormViolation { norm });
                }
            }
            if !zero_in_hull(set)? {
                return Err(Error::param("0 is not in the convex hull of an edge set"));
            }
        }
        Ok(())
    }
}

/// Exact hull membership for at most four points: some affinely independent
/// subset has non-negative barycentric coordinates for the origin.
pub fn zero_in_hull(points: &[Vec<f64>]) -> Result<bool> {
    if points.is_empty() || points.len() > 4 {
        return Err(Error::param(format!(
            "hull check supports 1 to 4 points, got {}",
            points.len()
        )));
    }
    let k = points.len();
    for mask in 1u32..(1 << k) {
        let subset: Vec<&Vec<f64>> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| &points[i]).collect();
        if let Some(lambda) = barycentric_of_origin(&subset) {
            if lambda.iter().all(|l| *l >= -HULL_TOLERANCE) {
                let residual = (0..points[0].len())
                    .map(|c| subset.iter().zip(&lambda).map(|(p, l)| l * p[c]).sum::<f64>().abs())
                    .fold(0.0, f64::max);
                if residual <= HULL_TOLERANCE {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Solves the normal equations of `[P; 1ᵀ] λ = [0; 1]`; `None` when the
/// points are affinely dependent.
fn barycentric_of_origin(points: &[&Vec<f64>]) -> Option<Vec<f64>> {
    let m = points.len();
    let col = |i: usize, r: usize| if r < points[i].len() { points[i][r] } else { 1.0 };
    let rows = points[0].len() + 1;
    let mut a = vec![vec![0.0; m + 1]; m];
    for i in 0..m {
        for j in 0..m {
            a[i][j] = (0..rows).map(|r| col(i, r) * col(j, r)).sum();
        }
        a[i][m] = 1.0;
    }
    for c in 0..m {
        let pivot = (c..m).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))?;
        if a[pivot][c].abs() < 1e-12 {
            return None;
        }
        a.swap(c, pivot);
        for r in 0..m {
            if r != c {
                let f = a[r][c] / a[c][c];
                for j in c..=m {
                    a[r][j] -= f * a[c][j];
                }
            }
        }
    }
    Some((0..m).map(|i| a[i][m] / a[i][i]).collect())
}

/// Value of a selection: `max_u ‖Σ_{e ∈ P_u} v_e‖∞`.
pub fn evaluate_selection(tree: &SelectionTree, selection: &[usize]) -> Result<f64> {
    if selection.len() != tree.edges() {
        return Err(Error::DimensionMismatch {
            expected: tree.edges(),
            got: selection.len(),
        });
    }
    if let Some(e) = (0..selection.len()).find(|&e| selection[e] >= tree.sets[e].len()) {
        return Err(Error::param(format!("selection index out of range on edge {e}")));
    }
    Ok(value_unchecked(tree, selection))
}

fn value_unchecked(tree: &SelectionTree, selection: &[usize]) -> f64 {
    let mut sums = vec![vec![0.0; tree.d]; tree.edges() + 1];
    let mut worst = 0.0f64;
    for (e, &p) in tree.parents.iter().enumerate() {
        let v = &tree.sets[e][selection[e]];
        let next: Vec<f64> = sums[p].iter().zip(v).map(|(s, x)| s + x).collect();
        worst = worst.max(norm_inf(&next));
        sums[e + 1] = next;
    }
    worst
}

/// Brute force over all selections in mixed-radix order; the first minimizer
/// is returned together with its value.
pub fn tree_selection_oracle(tree: &SelectionTree) -> Result<(Selection, f64)> {
    tree.validate()?;
    let mut current = vec![0usize; tree.edges()];
    let mut best = current.clone();
    let mut best_value = value_unchecked(tree, &current);
    loop {
        let mut e = 0;
        while e < current.len() {
            current[e] += 1;
            if current[e] < tree.sets[e].len() {
                break;
            }
            current[e] = 0;
            e += 1;
        }
        if e == current.len() {
            break;
        }
        let value = value_unchecked(tree, &current);
        if value < best_value {
            best_value = value;
            best.clone_from(&current);
        }
    }
    Ok((best, best_value))
}

fn random_ball_point<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Vec<f64> {
    loop {
        let p = vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        if p[0] * p[0] + p[1] * p[1] <= 1.0 {
            return p.into_iter().map(|x| x * radius).collect();
        }
    }
}

fn random_edge_set<R: Rng + ?Sized>(rng: &mut R) -> Vec<Vec<f64>> {
    match rng.random_range(1..=3) {
        1 => vec![vec![0.0, 0.0]],
        2 => {
            let v = random_ball_point(rng, 1.0);
            let s = rng.random_range(0.0..=1.0);
            vec![v.clone(), v.iter().map(|x| -s * x).collect()]
        }
        _ => loop {
            let a = random_ball_point(rng, 1.0);
            let b = random_ball_point(rng, 1.0);
            let w: [f64; 3] = [rng.random_range(0.05..1.0), rng.random_range(0.05..1.0), rng.random_range(0.05..1.0)];
            let c: Vec<f64> = (0..2).map(|i| -(w[0] * a[i] + w[1] * b[i]) / w[2]).collect();
            if c[0] * c[0] + c[1] * c[1] <= 1.0 {
                break vec![a, b, c];
            }
        },
    }
}

/// Random tree with at most 12 edges, depth at most 4, `d = 2`, and edge
/// sets of size at most 3 containing the origin in their hull.
pub fn random_tiny_tree<R: Rng + ?Sized>(rng: &mut R) -> SelectionTree {
    let edges = rng.random_range(1..=12);
    let mut depth = vec![0usize];
    let mut parents = Vec::with_capacity(edges);
    let mut sets = Vec::with_capacity(edges);
    for _ in 0..edges {
        let candidates: Vec<usize> = (0..depth.len()).filter(|&u| depth[u] < 4).collect();
        let p = candidates[rng.random_range(0..candidates.len())];
        parents.push(p);
        depth.push(depth[p] + 1);
        sets.push(random_edge_set(rng));
    }
    SelectionTree { parents, sets, d: 2 }
}

/// Runs the oracle on `trees` random tiny trees. The reported value is the
/// largest optimum; the probe fails if it exceeds `bound` or if any returned
/// selection does not evaluate to the reported optimum.
pub fn tree_oracle_probe(trees: usize, bound: f64, seed: RngSeed) -> Result<ProbeReport> {
    let mut rng = seed.rng();
    let mut worst = 0.0f64;
    let mut consistent = true;
    for _ in 0..trees {
        let tree = random_tiny_tree(&mut rng);
        let (selection, optimum) = tree_selection_oracle(&tree)?;
        consistent &= evaluate_selection(&tree, &selection)? == optimum;
        worst = worst.max(optimum);
    }
    let mut report = ProbeReport::exact("tree selection oracle", worst, bound, trees as u64, false);
    report.passed &= consistent;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent depth-first search with pruning.
    fn branch_and_bound(tree: &SelectionTree) -> f64 {
        fn go(tree: &SelectionTree, e: usize, sums: &mut Vec<Vec<f64>>, so_far: f64, best: &mut f64) {
            if so_far >= *best {
                return;
            }
            if e == tree.edges() {
                *best = so_far;
                return;
            }
            let p = tree.parents[e];
            for v in &tree.sets[e] {
                let next: Vec<f64> = sums[p].iter().zip(v).map(|(s, x)| s + x).collect();
                let here = next.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                sums[e + 1] = next;
                go(tree, e + 1, sums, so_far.max(here), best);
            }
        }
        let mut sums = vec![vec![0.0; tree.d]; tree.edges() + 1];
        let mut best = f64::INFINITY;
        go(tree, 0, &mut sums, 0.0, &mut best);
        best
    }

    #[test]
    fn alternating_path() {
        let v = vec![0.6, -0.3];
        let set = vec![v.clone(), v.iter().map(|x| -x).collect()];
        let tree = SelectionTree {
            parents: vec![0, 1],
            sets: vec![set.clone(), set],
            d: 2,
        };
        let (sel, opt) = tree_selection_oracle(&tree).unwrap();
        assert!(opt <= 0.6 + 1e-15);
        assert_eq!(evaluate_selection(&tree, &sel).unwrap(), opt);
    }

    #[test]
    fn all_zero_sets() {
        let tree = SelectionTree {
            parents: vec![0, 0, 1, 2],
            sets: vec![vec![vec![0.0, 0.0]]; 4],
            d: 2,
        };
        assert_eq!(tree_selection_oracle(&tree).unwrap(), (vec![0; 4], 0.0));
    }

    #[test]
    fn hull_membership() {
        assert!(zero_in_hull(&[vec![0.0, 0.0]]).unwrap());
        assert!(!zero_in_hull(&[vec![0.5, 0.0]]).unwrap());
        assert!(zero_in_hull(&[vec![1.0, 0.0], vec![-0.5, 0.0]]).unwrap());
        assert!(!zero_in_hull(&[vec![1.0, 0.0], vec![0.5, 0.1]]).unwrap());
        assert!(zero_in_hull(&[vec![1.0, 0.0], vec![-0.5, 0.5], vec![-0.5, -0.5]]).unwrap());
        assert!(!zero_in_hull(&[vec![1.0, 0.0], vec![0.5, 0.5], vec![0.5, -0.5]]).unwrap());
        // origin on an edge of a triangle
        assert!(zero_in_hull(&[vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]]).unwrap());
        assert!(zero_in_hull(&[vec![0.3, 0.3], vec![0.6, 0.6], vec![-0.1, -0.1], vec![0.2, 0.9]]).unwrap());
        assert!(zero_in_hull(&[]).is_err());
        assert!(zero_in_hull(&vec![vec![0.0, 0.0]; 5]).is_err());
    }

    #[test]
    fn rejects_invalid_trees() {
        let too_big = SelectionTree {
            parents: (0..13).collect(),
            sets: vec![vec![vec![0.1, 0.0], vec![-0.1, 0.0], vec![0.0, 0.0]]; 13],
            d: 2,
        };
        assert!(tree_selection_oracle(&too_big).is_err());
        let off_hull = SelectionTree {
            parents: vec![0],
            sets: vec![vec![vec![0.5, 0.5]]],
            d: 2,
        };
        assert!(tree_selection_oracle(&off_hull).is_err());
        let long = SelectionTree {
            parents: vec![0],
            sets: vec![vec![vec![1.0, 1.0], vec![-1.0, -1.0]]],
            d: 2,
        };
        assert!(tree_selection_oracle(&long).is_err());
    }

    #[test]
    fn random_trees_within_envelope() {
        let mut rng = RngSeed::new(10, 0).rng();
        for _ in 0..60 {
            let tree = random_tiny_tree(&mut rng);
            assert!(tree.depth() <= 4 && tree.edges() <= 12);
            assert!(tree.sets.iter().all(|s| s.len() <= 3 && zero_in_hull(s).unwrap()));
            let (sel, opt) = tree_selection_oracle(&tree).unwrap();
            assert_eq!(evaluate_selection(&tree, &sel).unwrap(), opt);
            assert!(opt <= 3.0);
            assert!(opt <= tree.depth() as f64 + 1e-12);
            assert_eq!(opt, branch_and_bound(&tree));
        }
    }
}
