//! Synthetic networks (Murray trees, honeycombs, the Y bifurcation and
//! arterio-venous pairs) and the convergence and conditioning studies run
//! on them.

mod conditioning;
mod convergence;
mod honeycomb;
mod mms;
mod trees;

pub use conditioning::{
    condition_entry, condition_with, conditioning_table, ConditionRow, Family, TableNorm,
    HONEYCOMB_SIZES, TABLE_H, TREE_SIZES,
};
pub use convergence::{
    convergence_csv, convergence_study, mms_errors, ConvergenceRow, Formulation, COARSEST_H,
};
pub use honeycomb::honeycomb;
pub use mms::{y_graph, y_mms, MmsCase};
pub use trees::{
    arterio_venous, conditioning_tree, murray_daughters, murray_tree, pruned_tree,
    ArterioVenousSpec, MurrayTreeSpec,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NetgenError {
    #[error(transparent)]
    Graph(#[from] netgraph::GraphError),
    #[error(transparent)]
    Forms(#[from] forms::FormsError),
    #[error(transparent)]
    Space(#[from] spaces::SpaceError),
    #[error(transparent)]
    Solver(#[from] solvers::SolverError),
}
