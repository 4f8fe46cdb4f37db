//! Finite abelian groups, their characters, and the normalized Fourier
//! transform.
//!
//! A group is a product of cyclic factors `Z_{n_1} x ... x Z_{n_k}`.
//! Elements and characters are both coordinate tuples `(x_1, ..., x_k)`
//! with `0 <= x_i < n_i`, and both carry the same canonical index:
//! mixed-radix with the last coordinate fastest. The character attached
//! to the exponent tuple `γ` acts on the element `x` by
//!
//! ```text
//! γ(x) = Π_i exp(2πi γ_i x_i / n_i)
//! ```
//!
//! The transform convention is conjugated and normalized,
//!
//! ```text
//! f̂(γ) = (1/|G|) Σ_x f(x) conj(γ(x)),      f(x) = Σ_γ f̂(γ) γ(x),
//! ```
//!
//! so that inversion holds for every `f`, not only for even ones, and
//! Parseval reads `(1/|G|) Σ_x |f(x)|² = Σ_γ |f̂(γ)|²`. For real even
//! functions — the only witnesses used downstream — this agrees with the
//! unconjugated convention.
//!
//! Transforms are direct `O(|G|²)` summations; every group in this crate
//! is tiny and exactness of the contract beats speed.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// A product of cyclic groups, the ambient space for everything in
/// [`crate::delsarte`] and [`crate::improved`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    cyclic_orders: Vec<u32>,
    order: usize,
}

/// A group element: one residue per cyclic factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    coords: Vec<u32>,
}

/// A multiplicative character of the group, stored as its exponent tuple.
/// The trivial character is the all-zero tuple.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character {
    coords: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GroupError {
    /// A cyclic factor of order zero was requested.
    ZeroOrder,
    /// The product of the cyclic orders does not fit in `usize`.
    OrderOverflow,
    /// A coordinate tuple has the wrong number of entries.
    LengthMismatch { expected: usize, got: usize },
    /// A coordinate lies outside its cyclic factor.
    CoordinateOutOfRange { position: usize, value: u32, modulus: u32 },
    /// Two values built over different groups were combined.
    GroupMismatch,
    /// A function does not assign one value per group element.
    ValueCountMismatch { expected: usize, got: usize },
}

impl fmt::Display for GroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupError::ZeroOrder => write!(f, "cyclic orders must be at least 1"),
            GroupError::OrderOverflow => write!(f, "group order overflows usize"),
            GroupError::LengthMismatch { expected, got } => {
                write!(f, "coordinate tuple has {got} entries, group has rank {expected}")
            }
            GroupError::CoordinateOutOfRange { position, value, modulus } => {
                write!(f, "coordinate {value} at position {position} not below {modulus}")
            }
            GroupError::GroupMismatch => write!(f, "values belong to different groups"),
            GroupError::ValueCountMismatch { expected, got } => {
                write!(f, "function has {got} values, group has order {expected}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GroupError {}

impl GroupElement {
    pub fn new(coords: Vec<u32>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }
}

impl Character {
    pub fn new(coords: Vec<u32>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }
}

fn fmt_coords(coords: &[u32], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "(")?;
    for (i, c) in coords.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{c}")?;
    }
    write!(f, ")")
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_coords(&self.coords, f)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_coords(&self.coords, f)
    }
}

impl FiniteAbelianGroup {
    pub fn new(cyclic_orders: Vec<u32>) -> Result<Self, GroupError> {
        if cyclic_orders.contains(&0) {
            return Err(GroupError::ZeroOrder);
        }
        let mut order = 1usize;
        for &n in &cyclic_orders {
            order = order.checked_mul(n as usize).ok_or(GroupError::OrderOverflow)?;
        }
        Ok(Self { cyclic_orders, order })
    }

    /// Convenience constructor for a single cyclic group `Z_n`.
    pub fn cyclic(n: u32) -> Result<Self, GroupError> {
        Self::new(vec![n])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.cyclic_orders.len()
    }

    pub fn cyclic_orders(&self) -> &[u32] {
        &self.cyclic_orders
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement::new(vec![0; self.rank()])
    }

    pub fn trivial_character(&self) -> Character {
        Character::new(vec![0; self.rank()])
    }

    fn check_coords(&self, coords: &[u32]) -> Result<(), GroupError> {
        if coords.len() != self.rank() {
            return Err(GroupError::LengthMismatch { expected: self.rank(), got: coords.len() });
        }
        for (position, (&value, &modulus)) in coords.iter().zip(&self.cyclic_orders).enumerate() {
            if value >= modulus {
                return Err(GroupError::CoordinateOutOfRange { position, value, modulus });
            }
        }
        Ok(())
    }

    pub fn check_element(&self, x: &GroupElement) -> Result<(), GroupError> {
        self.check_coords(&x.coords)
    }

    pub fn check_character(&self, gamma: &Character) -> Result<(), GroupError> {
        self.check_coords(&gamma.coords)
    }

    /// Canonical index of a coordinate tuple: mixed radix, last
    /// coordinate fastest. Stable across runs; file formats rely on it.
    pub fn index_of(&self, x: &GroupElement) -> usize {
        debug_assert!(self.check_element(x).is_ok());
        self.index_of_coords(&x.coords)
    }

    pub fn index_of_character(&self, gamma: &Character) -> usize {
        debug_assert!(self.check_character(gamma).is_ok());
        self.index_of_coords(&gamma.coords)
    }

    fn index_of_coords(&self, coords: &[u32]) -> usize {
        coords
            .iter()
            .zip(&self.cyclic_orders)
            .fold(0usize, |acc, (&c, &n)| acc * n as usize + c as usize)
    }

    fn coords_at(&self, mut index: usize) -> Vec<u32> {
        debug_assert!(index < self.order);
        let mut coords = vec![0u32; self.rank()];
        for (slot, &n) in coords.iter_mut().zip(&self.cyclic_orders).rev() {
            *slot = (index % n as usize) as u32;
            index /= n as usize;
        }
        coords
    }

    pub fn element_at(&self, index: usize) -> GroupElement {
        GroupElement::new(self.coords_at(index))
    }

    pub fn character_at(&self, index: usize) -> Character {
        Character::new(self.coords_at(index))
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|i| self.element_at(i))
    }

    pub fn characters(&self) -> impl Iterator<Item = Character> + '_ {
        (0..self.order).map(|i| self.character_at(i))
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let coords = x
            .coords
            .iter()
            .zip(&y.coords)
            .zip(&self.cyclic_orders)
            .map(|((&a, &b), &n)| ((a as u64 + b as u64) % n as u64) as u32)
            .collect();
        GroupElement::new(coords)
    }

    pub fn negate(&self, x: &GroupElement) -> GroupElement {
        let coords = x
            .coords
            .iter()
            .zip(&self.cyclic_orders)
            .map(|(&a, &n)| if a == 0 { 0 } else { n - a })
            .collect();
        GroupElement::new(coords)
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.add(x, &self.negate(y))
    }

    /// Index arithmetic versions of [`Self::sub`] and [`Self::negate`],
    /// used by the exhaustive searches.
    pub fn sub_indices(&self, x: usize, y: usize) -> usize {
        self.index_of(&self.sub(&self.element_at(x), &self.element_at(y)))
    }

    pub fn negate_index(&self, x: usize) -> usize {
        self.index_of(&self.negate(&self.element_at(x)))
    }
}

/// Value of the character `γ` at the element `x`:
/// `Π_i exp(2πi γ_i x_i / n_i)`. Multiplicative in both arguments and of
/// modulus one.
pub fn character_value(
    group: &FiniteAbelianGroup,
    gamma: &Character,
    x: &GroupElement,
) -> Result<Complex64, GroupError> {
    group.check_character(gamma)?;
    group.check_element(x)?;
    Ok(character_value_unchecked(group, &gamma.coords, &x.coords))
}

fn character_value_unchecked(group: &FiniteAbelianGroup, gamma: &[u32], x: &[u32]) -> Complex64 {
    // Accumulate the phase as a fraction of a full turn, reducing each
    // term mod n_i to keep the argument of sin/cos small.
    let mut turns = 0.0_f64;
    for ((&g, &c), &n) in gamma.iter().zip(x).zip(group.cyclic_orders()) {
        let prod = (g as u64 * c as u64) % n as u64;
        turns += prod as f64 / n as f64;
    }
    let angle = 2.0 * PI * turns;
    Complex64::new(angle.cos(), angle.sin())
}

/// A complex-valued function on the group (or, for transforms, on the
/// dual group), stored in canonical index order.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupFunction {
    group: FiniteAbelianGroup,
    values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn new(group: FiniteAbelianGroup, values: Vec<Complex64>) -> Result<Self, GroupError> {
        if values.len() != group.order() {
            return Err(GroupError::ValueCountMismatch {
                expected: group.order(),
                got: values.len(),
            });
        }
        Ok(Self { group, values })
    }

    pub fn from_real(group: FiniteAbelianGroup, values: &[f64]) -> Result<Self, GroupError> {
        let values = values.iter().map(|&re| Complex64::new(re, 0.0)).collect();
        Self::new(group, values)
    }

    pub fn constant(group: FiniteAbelianGroup, value: Complex64) -> Self {
        let values = vec![value; group.order()];
        Self { group, values }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value_at_index(&self, index: usize) -> Complex64 {
        self.values[index]
    }

    pub fn value_at(&self, x: &GroupElement) -> Result<Complex64, GroupError> {
        self.group.check_element(x)?;
        Ok(self.values[self.group.index_of(x)])
    }

    /// Largest imaginary part in absolute value.
    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    /// `f(-x) = f(x)` for every `x`, within `tol`.
    pub fn is_even(&self, tol: f64) -> bool {
        (0..self.group.order())
            .all(|i| (self.values[i] - self.values[self.group.negate_index(i)]).norm() <= tol)
    }

    /// `f̂(γ) = (1/|G|) Σ_x f(x) conj(γ(x))`, indexed by the canonical
    /// character order.
    pub fn fourier_transform(&self) -> GroupFunction {
        let n = self.group.order();
        let scale = 1.0 / n as f64;
        let values = (0..n)
            .map(|gi| {
                let gamma = self.group.coords_at(gi);
                let mut acc = Complex64::new(0.0, 0.0);
                for (xi, value) in self.values.iter().enumerate() {
                    let x = self.group.coords_at(xi);
                    acc += value * character_value_unchecked(&self.group, &gamma, &x).conj();
                }
                acc * scale
            })
            .collect();
        GroupFunction { group: self.group.clone(), values }
    }

    /// `f(x) = Σ_γ f̂(γ) γ(x)`; inverse of [`Self::fourier_transform`].
    pub fn inverse_transform(&self) -> GroupFunction {
        let n = self.group.order();
        let values = (0..n)
            .map(|xi| {
                let x = self.group.coords_at(xi);
                let mut acc = Complex64::new(0.0, 0.0);
                for (gi, value) in self.values.iter().enumerate() {
                    let gamma = self.group.coords_at(gi);
                    acc += value * character_value_unchecked(&self.group, &gamma, &x);
                }
                acc
            })
            .collect();
        GroupFunction { group: self.group.clone(), values }
    }
}

/// A symmetric subset `A = -A` of the group with `0 ∈ A`; sets `B` are
/// required to have all pairwise differences outside of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenSet {
    group: FiniteAbelianGroup,
    members: BTreeSet<usize>,
}

/// Outcome of [`validate_forbidden_set`]: which invariants hold and the
/// members whose negations are missing.
#[derive(Clone, Debug, PartialEq)]
pub struct ForbiddenSetReport {
    pub contains_zero: bool,
    pub missing_negations: Vec<GroupElement>,
}

impl ForbiddenSetReport {
    pub fn is_valid(&self) -> bool {
        self.contains_zero && self.missing_negations.is_empty()
    }
}

impl fmt::Display for ForbiddenSetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "forbidden set valid");
        }
        if !self.contains_zero {
            write!(f, "forbidden set does not contain 0")?;
            if !self.missing_negations.is_empty() {
                write!(f, "; ")?;
            }
        }
        if !self.missing_negations.is_empty() {
            write!(f, "members without their negation:")?;
            for x in &self.missing_negations {
                write!(f, " {x}")?;
            }
        }
        Ok(())
    }
}

impl ForbiddenSet {
    /// Builds the set without checking the symmetry/zero invariants, so
    /// that [`validate_forbidden_set`] can report on arbitrary input.
    pub fn from_members(
        group: FiniteAbelianGroup,
        members: &[GroupElement],
    ) -> Result<Self, GroupError> {
        let mut set = BTreeSet::new();
        for x in members {
            group.check_element(x)?;
            set.insert(group.index_of(x));
        }
        Ok(Self { group, members: set })
    }

    /// Builds the set and insists on the invariants.
    pub fn checked(
        group: FiniteAbelianGroup,
        members: &[GroupElement],
    ) -> Result<Self, InvalidForbiddenSet> {
        let set = Self::from_members(group, members).map_err(InvalidForbiddenSet::Group)?;
        let report = validate_forbidden_set(&set);
        if report.is_valid() {
            Ok(set)
        } else {
            Err(InvalidForbiddenSet::Invariant(report))
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.members.contains(&index)
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.group.check_element(x).is_ok() && self.contains_index(self.group.index_of(x))
    }

    pub fn member_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn members(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.members.iter().map(|&i| self.group.element_at(i))
    }

    /// Indices of `A^c`, in canonical order.
    pub fn complement_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.group.order()).filter(move |i| !self.members.contains(i))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InvalidForbiddenSet {
    Group(GroupError),
    Invariant(ForbiddenSetReport),
}

impl fmt::Display for InvalidForbiddenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvalidForbiddenSet::Group(e) => write!(f, "{e}"),
            InvalidForbiddenSet::Invariant(report) => write!(f, "{report}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for InvalidForbiddenSet {}

/// Checks `0 ∈ A` and `A = -A`, listing every member whose negation is
/// missing.
pub fn validate_forbidden_set(a: &ForbiddenSet) -> ForbiddenSetReport {
    let zero_index = a.group.index_of(&a.group.zero());
    let contains_zero = a.contains_index(zero_index);
    let missing_negations = a
        .member_indices()
        .filter(|&i| !a.contains_index(a.group.negate_index(i)))
        .map(|i| a.group.element_at(i))
        .collect();
    ForbiddenSetReport { contains_zero, missing_negations }
}

/// Renders a `String` out of an element list, for report messages.
pub(crate) fn format_elements(elements: &[GroupElement]) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    for (i, e) in elements.iter().enumerate() {
        if i > 0 {
            let _ = write!(out, " ");
        }
        let _ = write!(out, "{e}");
    }
    out
}
