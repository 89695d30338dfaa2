//! Valid-candidate generation: every syntax-valid, accessible,
//! type-compatible argument expression over the supported grammar.

pub mod generate;
pub mod render;

pub use crate::corpus::ast::ExprType;
pub use generate::{generate_candidates, GenConfig};
pub use render::{placeholderize, render_expr, PlaceholderShape};

use crate::features::VarProvenance;
use crate::typesys::ResolvedType;

/// A generated argument expression.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub expr_type: ExprType,
    /// Canonical text; empty hole slots for unfilled argument positions.
    pub rendered: String,
    pub result_type: ResolvedType,
    /// Unfilled slots left for follow-up requests.
    pub holes: usize,
    /// Local, parameter, or field reference (class and instance variables
    /// included); drives the recentness exponent.
    pub is_variable: bool,
    /// Identifier whose prior occurrences define accessing-recentness.
    pub recent_ident: Option<String>,
    /// Creation site for creating-distance.
    pub var_prov: Option<VarProvenance>,
    /// Declaring type when the candidate was built from a static member of
    /// a type outside the enclosing chain; reduction rules key off this.
    pub static_member_owner: Option<String>,
    /// Which accessible element produced the candidate.
    pub origin: String,
}

impl Candidate {
    pub fn is_static_derived(&self) -> bool {
        self.static_member_owner.is_some()
    }
}
