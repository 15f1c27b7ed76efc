//! Work budgets for the exponential desk-scale procedures.

/// Budgets shared by all brute-force procedures of the crate.
///
/// Every exact measure in this crate is exponential in some size parameter;
/// the limits turn runaway computations into errors instead of hangs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Maximal number of variables handed to the backtracking SAT test.
    pub sat_vars: usize,
    /// Maximal number of branching nodes of a single SAT test.
    pub sat_nodes: usize,
    /// Maximal number of variables for total-assignment enumeration.
    pub enum_vars: usize,
    /// Maximal number of variables for the max-over-instantiation measures.
    pub brute_force_vars: usize,
    /// Maximal number of distinct instantiations visited by those measures.
    pub brute_force_states: usize,
    /// Maximal number of clauses kept during resolution saturation.
    pub resolution_clauses: usize,
    /// Maximal number of subsets inspected by subset enumerations.
    pub subsets: usize,
    /// Maximal number of vertices for exact transversal and matching numbers.
    pub hypergraph_vertices: usize,
    /// Maximal number of branch-and-bound nodes for exact hypergraph numbers.
    pub hypergraph_nodes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            sat_vars: 40,
            sat_nodes: 10_000_000,
            enum_vars: 20,
            brute_force_vars: 16,
            brute_force_states: 4_000_000,
            resolution_clauses: 1_000_000,
            subsets: 1 << 22,
            hypergraph_vertices: 512,
            hypergraph_nodes: 5_000_000,
        }
    }
}
