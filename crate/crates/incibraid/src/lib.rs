//! Braided structures on incidence coalgebras of finite posets.

pub mod braidcheck;
pub mod braiding;
pub mod coalgebra;
pub mod families;
pub mod poset;
pub mod search;
pub mod scalars;
