use serde::{Deserialize, Serialize};

/// Resource caps shared by every computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    pub max_group_order: usize,
    pub max_word_length: usize,
    pub max_bar_degree: usize,
    pub max_monomials: usize,
    /// Largest free rank of a bar resolution term.
    pub max_bar_rank: usize,
    pub l_min: usize,
    pub l_max: usize,
    /// Largest dense matrix side handed to the Smith form after sparse
    /// elimination.
    pub max_dense_dim: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_group_order: 512,
            max_word_length: 64,
            max_bar_degree: 8,
            max_monomials: 200_000,
            max_bar_rank: 2_000_000,
            l_min: 4,
            l_max: 10,
            max_dense_dim: 4000,
        }
    }
}
