//! Signed filters as morphisms between vertex spaces.
//!
//! Objects are the trivial space `{0}`, the spaces `X_j` spanned by
//! `sin(jℓx)` with `ℓ` odd, and the spaces `X̃_j` spanned by all multiples of
//! `j`. A morphism `±C_h` with `h` unit-modulus is a symmetry of a vertex when
//! it maps the vertex onto itself; diagonal filters never move one vertex
//! onto another, so every morphism is a loop.

use crate::control::{FilterKernel, Sign};
use crate::spectral::{is_extended_vertex_mode, is_vertex_mode, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum GroupoidError {
    #[error("kernel is not unit-modulus")]
    NotUnitModulus,
    #[error("kernel does not fix the modes of {vertex:?}")]
    NotASymmetry { vertex: Vertex },
    #[error("filters map {from:?} onto itself, not onto {to:?}")]
    NoSuchMorphism { from: Vertex, to: Vertex },
    #[error("cannot compose a morphism ending at {ends:?} with one starting at {starts:?}")]
    NotComposable { ends: Vertex, starts: Vertex },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vertex {
    /// `X_0 = {0}`.
    Trivial,
    /// `X_j`.
    Odd(usize),
    /// `X̃_j`.
    Full(usize),
}

impl Vertex {
    /// Whether `sin(kx)` lies in the vertex space.
    pub fn contains_mode(self, k: usize) -> bool {
        match self {
            Vertex::Trivial => false,
            Vertex::Odd(j) => is_vertex_mode(k, j),
            Vertex::Full(j) => is_extended_vertex_mode(k, j),
        }
    }

    /// Whether `C_h` fixes the vertex pointwise: `h ∈ H_j`, `h ∈ H̃_j`, or any
    /// kernel at the trivial vertex.
    pub fn is_fixed_by(self, kernel: &FilterKernel) -> bool {
        match self {
            Vertex::Trivial => true,
            Vertex::Odd(j) => kernel.is_member_h(j),
            Vertex::Full(j) => kernel.is_member_h_extended(j),
        }
    }
}

/// `γ = ±C_h` from `source` to `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct Morphism {
    source: Vertex,
    target: Vertex,
    sign: Sign,
    kernel: FilterKernel,
}

impl Morphism {
    pub fn new(
        source: Vertex,
        target: Vertex,
        sign: Sign,
        kernel: FilterKernel,
    ) -> Result<Self, GroupoidError> {
        if source != target {
            return Err(GroupoidError::NoSuchMorphism {
                from: source,
                to: target,
            });
        }
        if !kernel.is_unit_modulus() {
            return Err(GroupoidError::NotUnitModulus);
        }
        if !source.is_fixed_by(&kernel) {
            return Err(GroupoidError::NotASymmetry { vertex: source });
        }
        Ok(Self {
            source,
            target,
            sign,
            kernel,
        })
    }

    /// An element of the vertex symmetry group at `vertex`.
    pub fn symmetry(
        vertex: Vertex,
        sign: Sign,
        kernel: FilterKernel,
    ) -> Result<Self, GroupoidError> {
        Self::new(vertex, vertex, sign, kernel)
    }

    /// `e_b`: sign `+1`, `h ≡ 1`.
    pub fn identity(vertex: Vertex, modes: usize) -> Self {
        Self {
            source: vertex,
            target: vertex,
            sign: Sign::Plus,
            kernel: FilterKernel::identity(modes),
        }
    }

    pub fn source(&self) -> Vertex {
        self.source
    }

    pub fn target(&self) -> Vertex {
        self.target
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn kernel(&self) -> &FilterKernel {
        &self.kernel
    }

    /// `self ∘ other`, defined when `other` ends where `self` starts.
    pub fn compose(&self, other: &Morphism) -> Result<Morphism, GroupoidError> {
        if other.target != self.source {
            return Err(GroupoidError::NotComposable {
                ends: other.target,
                starts: self.source,
            });
        }
        Ok(Morphism {
            source: other.source,
            target: self.target,
            sign: self.sign * other.sign,
            kernel: self.kernel.compose(&other.kernel),
        })
    }

    /// Unit-modulus kernels are their own termwise reciprocals.
    pub fn inverse(&self) -> Morphism {
        Morphism {
            source: self.target,
            target: self.source,
            sign: self.sign,
            kernel: self.kernel.clone(),
        }
    }

    /// `±C_h[f]`.
    pub fn apply(&self, field: &SpectralField) -> SpectralField {
        self.kernel.apply(field).scaled(self.sign.value())
    }

    /// Sign `+1`: the element lies in the isotropy group and fixes its
    /// vertex pointwise.
    pub fn is_isotropy(&self) -> bool {
        self.sign == Sign::Plus
    }

    /// Largest entrywise difference to `other`, counting a vertex or sign
    /// mismatch as infinite.
    pub fn distance(&self, other: &Morphism) -> f64 {
        if self.source != other.source || self.target != other.target || self.sign != other.sign {
            return f64::INFINITY;
        }
        let n = self.kernel.truncation().max(other.kernel.truncation());
        (1..=n)
            .map(|m| (self.kernel.param(m) - other.kernel.param(m)).abs())
            .fold(
                (self.kernel.tail_value() - other.kernel.tail_value()).abs(),
                f64::max,
            )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn kernel(params: &[f64]) -> FilterKernel {
        FilterKernel::new(params.to_vec(), 1.0).unwrap()
    }

    #[test]
    fn admission_rules() {
        let v = Vertex::Odd(1);
        assert!(Morphism::symmetry(v, Sign::Minus, kernel(&[1.0, -1.0, 1.0])).is_ok());
        assert_eq!(
            Morphism::symmetry(v, Sign::Plus, kernel(&[1.0, 0.5, 1.0])),
            Err(GroupoidError::NotUnitModulus)
        );
        assert_eq!(
            Morphism::symmetry(v, Sign::Plus, kernel(&[1.0, 1.0, -1.0])),
            Err(GroupoidError::NotASymmetry { vertex: v })
        );
        assert!(matches!(
            Morphism::new(Vertex::Odd(1), Vertex::Odd(2), Sign::Plus, kernel(&[1.0])),
            Err(GroupoidError::NoSuchMorphism { .. })
        ));
        // Every unit-modulus kernel is a symmetry of the trivial vertex.
        assert!(Morphism::symmetry(Vertex::Trivial, Sign::Plus, kernel(&[-1.0, -1.0])).is_ok());
        // X̃_2 needs h_4 = 1 as well; X_2 does not.
        let k = kernel(&[-1.0, 1.0, -1.0, -1.0]);
        assert!(Morphism::symmetry(Vertex::Odd(2), Sign::Plus, k.clone()).is_ok());
        assert!(Morphism::symmetry(Vertex::Full(2), Sign::Plus, k).is_err());
    }

    #[test]
    fn composition_and_inverses() {
        let v = Vertex::Odd(2);
        let g = Morphism::symmetry(v, Sign::Minus, kernel(&[-1.0, 1.0, -1.0, 1.0])).unwrap();
        let e = Morphism::identity(v, 4);
        assert_eq!(e.compose(&g).unwrap(), g);
        assert_eq!(g.compose(&e).unwrap(), g);
        assert_eq!(g.compose(&g.inverse()).unwrap().distance(&e), 0.0);

        let other = Morphism::identity(Vertex::Odd(1), 4);
        assert_eq!(
            other.compose(&g),
            Err(GroupoidError::NotComposable {
                ends: v,
                starts: Vertex::Odd(1)
            })
        );
    }

    #[test]
    fn isotropy_fixes_vertex_pointwise() {
        let v = Vertex::Odd(1);
        let g = Morphism::symmetry(v, Sign::Plus, kernel(&[1.0, -1.0, 1.0, -1.0])).unwrap();
        let f = SpectralField::new(vec![0.3, 0.0, -0.2, 0.0]).unwrap();
        assert!(g.is_isotropy());
        assert_eq!(g.apply(&f), f);
        let flip = Morphism::symmetry(v, Sign::Minus, g.kernel().clone()).unwrap();
        assert_eq!(flip.apply(&f), -&f);
    }
}
