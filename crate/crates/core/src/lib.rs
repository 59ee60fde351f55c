//! One-sided exact structures and their homological lemmas, computed in the
//! category of finitely generated abelian groups.

pub mod fgab;
pub mod intlin;
pub mod exactstruct;
pub mod complexes;
pub mod homlemmas;
pub mod par;
pub mod suites;
