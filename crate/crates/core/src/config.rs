/// Resource caps. Every enumeration that can blow up checks one of these and
/// fails with `Error::CapExceeded` instead of thrashing.
#[derive(Clone, Debug)]
pub struct Caps {
    /// Maximum group order `enumerate_elements` will close over.
    pub group_order: usize,
    /// Maximum permutation degree (number of moved points).
    pub degree: usize,
    /// Maximum tuples visited by a single orbit walk.
    pub orbit_tuples: usize,
    /// Maximum search-tree leaves for exhaustive tuple generation at one
    /// degree; beyond it the table switches to the product-closure strategy.
    pub brute_work: u64,
    /// Maximum tuples stored during exhaustive generation at one degree.
    pub brute_store: usize,
    /// Maximum symbol count for symmetric-group census and closed-form paths.
    pub sym_d: usize,
    /// Maximum number of class-generated subgroups the registry will hold.
    pub subgroup_count: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            group_order: 1_000_000,
            degree: 10,
            orbit_tuples: 10_000_000,
            brute_work: 40_000_000,
            brute_store: 8_000_000,
            sym_d: 12,
            subgroup_count: 20_000,
        }
    }
}
