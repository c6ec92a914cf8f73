//! Size limits for the exhaustive evaluators.

pub const ENV_BRUTE_CAP: &str = "SPINCOUNT_BRUTE_CAP";

/// Largest arity accepted by the function algebra.
pub const MAX_ARITY: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Variable count limit for `z_exact`.
    pub brute_force: usize,
    /// Variable count limit for `near_assignment_total`.
    pub near_assignment: usize,
    /// Vertex count limit for exact matching counts.
    pub matching: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { brute_force: 24, near_assignment: 12, matching: 30 }
    }
}

impl Caps {
    /// Defaults, with `SPINCOUNT_BRUTE_CAP` overriding both brute-force limits.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Some(n) = std::env::var(ENV_BRUTE_CAP).ok().and_then(|v| v.trim().parse().ok()) {
            caps.brute_force = n;
            caps.near_assignment = n;
        }
        caps
    }
}
