//! File formats and inline-argument parsing.
//!
//! Schemas:
//! * group: `{"cyclic_orders": [6]}`
//! * forbidden set: `{"members": [[1], [5]]}` (coordinate tuples)
//! * function: `{"re": [...], "im": [...]}` in canonical index order
//! * matrix: `{"n": 6, "re": [[...]], "im": [[...]]}` (row-major)
//! * parameters: `{"a_phase": 0.0, "b_phase": 0.0}`
//! * linear program (debug): objective, a_ub/b_ub, a_eq/b_eq, bounds

use std::fs;
use std::path::Path;

use delsarte_core::group::{FiniteAbelianGroup, ForbiddenSet, GroupElement, GroupFunction};
use delsarte_core::lp::LinearProgram;
use delsarte_core::mub::{HadamardMatrix, UNIMODULAR_TOL};
use delsarte_core::Complex64;
use serde::{Deserialize, Serialize};

/// Every report embeds the tolerances it was judged with.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ToleranceSet {
    /// Absolute tolerance for "real" / "nonnegative" / "zero".
    pub general: f64,
    /// Entry-wise unimodularity slack on torus vectors and parameters.
    pub unimodularity: f64,
    /// Floor below which strict-inequality margins are not trusted.
    pub strict_margin_floor: f64,
}

impl ToleranceSet {
    pub fn new(general: f64) -> Self {
        Self { general, unimodularity: UNIMODULAR_TOL, strict_margin_floor: 1e-9 }
    }
}

#[derive(Debug)]
pub struct IoFailure {
    pub message: String,
}

impl IoFailure {
    pub fn new(message: impl Into<String>) -> Self {
        Self { message: message.into() }
    }
}

impl std::fmt::Display for IoFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for IoFailure {}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, IoFailure> {
    let text = fs::read_to_string(path)
        .map_err(|e| IoFailure::new(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        IoFailure::new(format!(
            "malformed JSON in {} at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GroupSpecFile {
    pub cyclic_orders: Vec<u32>,
}

pub fn read_group(path: &Path) -> Result<FiniteAbelianGroup, IoFailure> {
    let spec: GroupSpecFile = read_json(path)?;
    FiniteAbelianGroup::new(spec.cyclic_orders).map_err(|e| IoFailure::new(e.to_string()))
}

/// Inline group syntax: cyclic orders separated by `x`, e.g. "6" or
/// "2x2x3".
pub fn parse_group(text: &str) -> Result<FiniteAbelianGroup, IoFailure> {
    let orders: Result<Vec<u32>, _> = text.split('x').map(|p| p.trim().parse::<u32>()).collect();
    let orders = orders.map_err(|e| IoFailure::new(format!("bad group '{text}': {e}")))?;
    FiniteAbelianGroup::new(orders).map_err(|e| IoFailure::new(e.to_string()))
}

/// Inline element lists. Elements are semicolon-separated tuples of
/// comma-separated coordinates; on rank-1 groups commas may separate
/// elements as well ("1,4" means {1, 4}).
pub fn parse_elements(
    group: &FiniteAbelianGroup,
    text: &str,
) -> Result<Vec<GroupElement>, IoFailure> {
    let mut elements = Vec::new();
    let text = text.trim();
    if text.is_empty() {
        return Ok(elements);
    }
    for chunk in text.split(';') {
        let coords: Result<Vec<i64>, _> =
            chunk.split(',').map(|p| p.trim().parse::<i64>()).collect();
        let coords = coords.map_err(|e| IoFailure::new(format!("bad element '{chunk}': {e}")))?;
        if group.rank() == 1 {
            for value in coords {
                elements.push(reduce_element(group, &[value])?);
            }
        } else {
            elements.push(reduce_element(group, &coords)?);
        }
    }
    Ok(elements)
}

/// Coordinates are taken mod the cyclic orders, so "-1" names the
/// negation of 1.
fn reduce_element(group: &FiniteAbelianGroup, coords: &[i64]) -> Result<GroupElement, IoFailure> {
    if coords.len() != group.rank() {
        return Err(IoFailure::new(format!(
            "element has {} coordinates, group has rank {}",
            coords.len(),
            group.rank()
        )));
    }
    let reduced: Vec<u32> = coords
        .iter()
        .zip(group.cyclic_orders())
        .map(|(&c, &n)| (c.rem_euclid(n as i64)) as u32)
        .collect();
    Ok(GroupElement::new(reduced))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ForbiddenSetFile {
    pub members: Vec<Vec<i64>>,
}

pub fn read_forbidden_members(
    group: &FiniteAbelianGroup,
    path: &Path,
) -> Result<Vec<GroupElement>, IoFailure> {
    let file: ForbiddenSetFile = read_json(path)?;
    file.members.iter().map(|coords| reduce_element(group, coords)).collect()
}

/// Builds the forbidden set with 0 always included, reporting invariant
/// violations as a failure message.
pub fn build_forbidden(
    group: &FiniteAbelianGroup,
    mut members: Vec<GroupElement>,
) -> Result<ForbiddenSet, String> {
    members.push(group.zero());
    match ForbiddenSet::checked(group.clone(), &members) {
        Ok(set) => Ok(set),
        Err(e) => Err(e.to_string()),
    }
}

pub fn forbidden_members_json(a: &ForbiddenSet) -> Vec<Vec<u32>> {
    a.members().map(|m| m.coords().to_vec()).collect()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FunctionFile {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl FunctionFile {
    pub fn from_function(f: &GroupFunction) -> Self {
        Self {
            re: f.values().iter().map(|v| v.re).collect(),
            im: f.values().iter().map(|v| v.im).collect(),
        }
    }
}

pub fn read_function(group: &FiniteAbelianGroup, path: &Path) -> Result<GroupFunction, IoFailure> {
    let file: FunctionFile = read_json(path)?;
    if file.re.len() != file.im.len() {
        return Err(IoFailure::new(format!(
            "re has {} entries but im has {}",
            file.re.len(),
            file.im.len()
        )));
    }
    let values: Vec<Complex64> =
        file.re.iter().zip(&file.im).map(|(&re, &im)| Complex64::new(re, im)).collect();
    GroupFunction::new(group.clone(), values).map_err(|e| IoFailure::new(e.to_string()))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    /// Row-major real parts.
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &HadamardMatrix) -> Self {
        let n = m.n();
        let mut re = vec![vec![0.0; n]; n];
        let mut im = vec![vec![0.0; n]; n];
        for row in 0..n {
            for col in 0..n {
                let v = m.entry(row, col);
                re[row][col] = v.re;
                im[row][col] = v.im;
            }
        }
        Self { n, re, im }
    }

    pub fn into_matrix(self) -> Result<HadamardMatrix, IoFailure> {
        if self.re.len() != self.n
            || self.im.len() != self.n
            || self.re.iter().chain(&self.im).any(|row| row.len() != self.n)
        {
            return Err(IoFailure::new("matrix rows do not match n"));
        }
        let cols: Vec<Vec<Complex64>> = (0..self.n)
            .map(|col| {
                (0..self.n)
                    .map(|row| Complex64::new(self.re[row][col], self.im[row][col]))
                    .collect()
            })
            .collect();
        HadamardMatrix::from_columns(cols).map_err(|e| IoFailure::new(e.to_string()))
    }
}

pub fn read_matrix(path: &Path) -> Result<HadamardMatrix, IoFailure> {
    let file: MatrixFile = read_json(path)?;
    file.into_matrix()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ParamsFile {
    pub a_phase: f64,
    pub b_phase: f64,
}

pub fn read_params(path: &Path) -> Result<ParamsFile, IoFailure> {
    read_json(path)
}

/// Debug serialization of LP instances.
#[derive(Debug, Serialize, Deserialize)]
pub struct LinearProgramFile {
    pub objective: Vec<f64>,
    pub a_ub: Vec<Vec<f64>>,
    pub b_ub: Vec<f64>,
    pub a_eq: Vec<Vec<f64>>,
    pub b_eq: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<Option<f64>>,
}

impl LinearProgramFile {
    pub fn from_lp(lp: &LinearProgram) -> Self {
        Self {
            objective: lp.objective.clone(),
            a_ub: lp.a_ub.clone(),
            b_ub: lp.b_ub.clone(),
            a_eq: lp.a_eq.clone(),
            b_eq: lp.b_eq.clone(),
            lower: lp.lower.clone(),
            upper: lp.upper.clone(),
        }
    }

    pub fn into_lp(self) -> LinearProgram {
        LinearProgram {
            objective: self.objective,
            a_ub: self.a_ub,
            b_ub: self.b_ub,
            a_eq: self.a_eq,
            b_eq: self.b_eq,
            lower: self.lower,
            upper: self.upper,
        }
    }
}
