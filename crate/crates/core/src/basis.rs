//! Matrices of homogeneous operators in the bases used throughout: power
//! sums, normalized power sums, Jack functions and fixed-point classes.
//! Rows are indexed by the source basis, columns by the target basis.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hilb::{fixed_point_basis, EquivParams};
use crate::jack::build_jack;
use crate::linalg::{LabeledMatrix, Matrix};
use crate::ops::Operator;
use crate::partition::{self, Partition};
use crate::rational::{parse_q, Q};
use crate::symfun::SymFun;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Basis {
    PowerSum,
    Normalized,
    Jack(Q),
    FixedPoint(EquivParams),
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::PowerSum => write!(f, "p"),
            Basis::Normalized => write!(f, "v"),
            Basis::Jack(alpha) => write!(f, "jack:{alpha}"),
            Basis::FixedPoint(params) => write!(f, "fixed:{},{}", params.e1(), params.e2()),
        }
    }
}

/// `p`, `v`, `jack:<alpha>` or `fixed:<e1>,<e2>`.
impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "p" => return Ok(Basis::PowerSum),
            "v" => return Ok(Basis::Normalized),
            _ => {}
        }
        if let Some(alpha) = s.strip_prefix("jack:") {
            return Ok(Basis::Jack(parse_q(alpha)?));
        }
        if let Some(rest) = s.strip_prefix("fixed:") {
            let (a, b) = rest
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected fixed:<e1>,<e2>, got {s:?}")))?;
            return Ok(Basis::FixedPoint(EquivParams::new(parse_q(a)?, parse_q(b)?)?));
        }
        Err(Error::Parse(format!("unknown basis {s:?}")))
    }
}

impl Basis {
    /// Basis vectors of degree `n` in power-sum coordinates, in canonical
    /// partition order.
    pub fn vectors(&self, n: usize) -> Result<BTreeMap<Partition, SymFun>> {
        Ok(match self {
            Basis::PowerSum => partition::enumerate(n)
                .into_iter()
                .map(|l| (l.clone(), SymFun::p(l)))
                .collect(),
            Basis::Normalized => partition::enumerate(n)
                .into_iter()
                .map(|l| (l.clone(), SymFun::v(l)))
                .collect(),
            Basis::Jack(alpha) => build_jack(n, alpha)?.vectors().clone(),
            Basis::FixedPoint(params) => fixed_point_basis(n, params)?,
        })
    }

    /// Coordinates of a degree-`n` function against `vectors(n)`.
    fn coordinates(&self, f: &SymFun, labels: &[Partition], inverse: Option<&Matrix>) -> Vec<Q> {
        match self {
            Basis::PowerSum => labels.iter().map(|l| f.coeff(l)).collect(),
            Basis::Normalized => {
                let c = f.normalized_basis_coords();
                labels
                    .iter()
                    .map(|l| c.get(l).cloned().unwrap_or_else(Q::zero))
                    .collect()
            }
            _ => {
                let inv = inverse.expect("inverse for non-diagonal basis");
                let x: Vec<Q> = labels.iter().map(|l| f.coeff(l)).collect();
                (0..labels.len())
                    .map(|j| x.iter().enumerate().map(|(i, xi)| xi * &inv[(i, j)]).sum())
                    .collect()
            }
        }
    }
}

/// Change-of-basis matrix whose rows are the basis vectors in power sums.
fn to_power_sums(vectors: &BTreeMap<Partition, SymFun>, labels: &[Partition]) -> Matrix {
    Matrix::from_rows(
        labels
            .iter()
            .map(|l| {
                let f = &vectors[l];
                labels.iter().map(|mu| f.coeff(mu)).collect()
            })
            .collect(),
    )
}

/// Matrix of a homogeneous operator from degree `n` to degree `n + deg`.
pub fn matrix_in_basis(op: &Operator, n: usize, basis: &Basis) -> Result<LabeledMatrix> {
    let shift = op.degree().ok_or_else(|| {
        Error::InvalidParameter(format!("operator {} is not homogeneous", op.name()))
    })?;
    let target_degree = n as i64 + shift;
    let rows = partition::enumerate(n);
    if target_degree < 0 {
        return Ok(LabeledMatrix {
            matrix: Matrix::zeros(rows.len(), 0),
            rows,
            cols: Vec::new(),
        });
    }
    let target_degree = target_degree as usize;
    let cols = partition::enumerate(target_degree);
    let source = basis.vectors(n)?;
    let target = if target_degree == n {
        source.clone()
    } else {
        basis.vectors(target_degree)?
    };
    let inverse = match basis {
        Basis::PowerSum | Basis::Normalized => None,
        _ => Some(to_power_sums(&target, &cols).inverse()?),
    };
    let mut entries = Vec::with_capacity(rows.len());
    for lambda in &rows {
        let image = op.apply(&source[lambda])?;
        entries.push(basis.coordinates(&image, &cols, inverse.as_ref()));
    }
    Ok(LabeledMatrix {
        matrix: if entries.is_empty() {
            Matrix::zeros(0, cols.len())
        } else {
            Matrix::from_rows(entries)
        },
        rows,
        cols,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{cut_and_join, grading, ladder};
    use crate::rational::{frac, q};

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn parse_and_display() {
        for s in ["p", "v", "jack:1/2", "fixed:1,-2"] {
            assert_eq!(s.parse::<Basis>().unwrap().to_string(), s);
        }
        assert!("q".parse::<Basis>().is_err());
        assert!("fixed:1".parse::<Basis>().is_err());
        assert!("fixed:0,1".parse::<Basis>().is_err());
    }

    #[test]
    fn w2_in_normalized_basis_degree_four() {
        let m = matrix_in_basis(&cut_and_join(), 4, &Basis::Normalized).unwrap();
        let expected = [
            [0, 3, 4, 0, 0],
            [4, 0, 0, 4, 0],
            [2, 0, 0, 1, 0],
            [0, 3, 2, 0, 6],
            [0, 0, 0, 1, 0],
        ];
        // rows/cols (4), (3,1), (2,2), (2,1,1), (1,1,1,1)
        let want = Matrix::from_rows(
            expected.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect(),
        );
        assert_eq!(m.matrix, want);
        assert_eq!(m.entry(&p(&[4]), &p(&[3, 1])), Some(&q(3)));
    }

    #[test]
    fn grading_is_scalar_in_every_basis() {
        let bases = [
            Basis::PowerSum,
            Basis::Normalized,
            Basis::Jack(frac(2, 3)),
            Basis::FixedPoint(EquivParams::new(q(2), q(-3)).unwrap()),
        ];
        for b in &bases {
            let m = matrix_in_basis(&grading(), 3, b).unwrap();
            assert_eq!(m.matrix, Matrix::identity(3).scale(&q(3)), "{b}");
        }
    }

    #[test]
    fn degree_raising_shape() {
        let m = matrix_in_basis(&ladder(), 2, &Basis::PowerSum).unwrap();
        assert_eq!((m.matrix.rows(), m.matrix.cols()), (2, 3));
        // E1 p_2 = 2 p_3, E1 p_1^2 = 2 p_2 p_1
        assert_eq!(m.entry(&p(&[2]), &p(&[3])), Some(&q(2)));
        assert_eq!(m.entry(&p(&[1, 1]), &p(&[2, 1])), Some(&q(2)));
    }

    #[test]
    fn inhomogeneous_rejected() {
        let op = crate::ops::w0_beta(&q(1), &q(1), true);
        assert!(matrix_in_basis(&op, 2, &Basis::PowerSum).is_err());
    }
}
