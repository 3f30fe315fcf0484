//! Exact cyclotomic matrix groups for the classification of symplectically
//! primitive, complex imprimitive symplectic reflection groups in dimension 4,
//! and the stabilizer computation for `W(S_2)`.

pub mod cyclo;
pub mod families;
pub mod matrep;
pub mod reflect;
pub mod rigidity;
pub mod verdict;
pub mod ws2;
