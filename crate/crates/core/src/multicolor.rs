//! Multicolor discrepancy through a binary tree of weighted balancers.
//!
//! A node with `k` leaves below it runs a weighted balancer with
//! `α = ⌈k/2⌉ / k`. The `1 − α` outcome (taken with probability about `α`)
//! routes the vector into the left subtree, which has `⌈k/2⌉` leaves; `−α`
//! routes it right. Each leaf therefore receives a `1/n` share of the
//! stream in expectation.
//!
//! `c_param` is given in the units of the self-balancing walk: a node with
//! weight `α` runs its weighted balancer with `α · c_param`, which has the
//! same drift as a self-balancing walk with `c_param`. For `n = 2` the tree
//! is exactly that walk.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::balancers::BalancerState;
use crate::error::{Error, Result};
use crate::types::VectorItem;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Internal {
        leaves: usize,
        alpha: f64,
        balancer: BalancerState,
        left: usize,
        right: usize,
    },
    Leaf {
        color: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorTree {
    nodes: Vec<TreeNode>,
    n: usize,
    d: usize,
}

impl ColorTree {
    /// Builds the tree for `n` colors over `d`-dimensional vectors.
    pub fn build(n: usize, d: usize, c_param: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("a color tree needs at least one color"));
        }
        // validates d and c_param once for all nodes
        BalancerState::new(d, c_param)?;
        let mut tree = Self {
            nodes: Vec::with_capacity(2 * n - 1),
            n,
            d,
        };
        let mut next_color = 0;
        tree.grow(n, &mut next_color, c_param)?;
        Ok(tree)
    }

    fn grow(&mut self, k: usize, next_color: &mut usize, c_param: f64) -> Result<usize> {
        let index = self.nodes.len();
        if k == 1 {
            self.nodes.push(TreeNode::Leaf { color: *next_color });
            *next_color += 1;
            return Ok(index);
        }
        let alpha = k.div_ceil(2) as f64 / k as f64;
        self.nodes.push(TreeNode::Internal {
            leaves: k,
            alpha,
            balancer: BalancerState::new(self.d, alpha * c_param)?,
            left: usize::MAX,
            right: usize::MAX,
        });
        let left = self.grow(k.div_ceil(2), next_color, c_param)?;
        let right = self.grow(k / 2, next_color, c_param)?;
        if let TreeNode::Internal {
            left: l, right: r, ..
        } = &mut self.nodes[index]
        {
            *l = left;
            *r = right;
        }
        Ok(index)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    /// Routes `v` from the root to a leaf, updating every balancer on the way.
    pub fn assign_color<R: Rng + ?Sized>(&mut self, v: &VectorItem, rng: &mut R) -> Result<usize> {
        if v.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: v.dim(),
            });
        }
        v.check_unit_ball()?;
        let mut at = 0;
        loop {
            match &mut self.nodes[at] {
                TreeNode::Leaf { color } => return Ok(*color),
                TreeNode::Internal {
                    alpha,
                    balancer,
                    left,
                    right,
                    ..
                } => {
                    let weight = balancer.weighted_choice(v, *alpha, rng)?;
                    at = if weight > 0.0 { *left } else { *right };
                }
            }
        }
    }

    /// Product of the edge weights `p_e` (left: `α`, right: `1 − α`) along
    /// each root-to-leaf path, indexed by color.
    pub fn leaf_path_products(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        let mut stack = vec![(0usize, 1.0f64)];
        while let Some((at, pi)) = stack.pop() {
            match &self.nodes[at] {
                TreeNode::Leaf { color } => out[*color] = pi,
                TreeNode::Internal {
                    alpha, left, right, ..
                } => {
                    stack.push((*left, pi * alpha));
                    stack.push((*right, pi * (1.0 - alpha)));
                }
            }
        }
        out
    }

    pub fn balancers(&self) -> impl Iterator<Item = &BalancerState> {
        self.nodes.iter().filter_map(|node| match node {
            TreeNode::Internal { balancer, .. } => Some(balancer),
            TreeNode::Leaf { .. } => None,
        })
    }

    /// Clamp events summed over all internal nodes.
    pub fn total_clamps(&self) -> usize {
        self.balancers().map(BalancerState::clamp_count).sum()
    }
}
