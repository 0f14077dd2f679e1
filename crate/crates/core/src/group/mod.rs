//! Concrete binary dihedral, dihedral and cyclic groups: elements, classes,
//! character tables, subgroup class maps and Frobenius counting.

mod chars;
mod frobenius;
mod model;
mod restriction;

pub use chars::{character_table, mckay_adjacency, tensor_decompose_rho1, CharacterTable, Irrep};
pub use frobenius::{frobenius_count, frobenius_count_characters, frobenius_count_convolution};
pub use model::{ClassInfo, ClassKind, Elem, Family, GroupModel};
pub use restriction::{restriction_map, ClassMap};
