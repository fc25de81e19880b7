//! Named operators: cut, join, the diagonal operators, the ladder, the
//! beta-deformed cubic operator, Virasoro generators in power sums and
//! the commutator hierarchy.

use num_traits::One;

use super::{add_into, commutator, Operator, TermMap};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::rational::{frac, q, qu, Q};

fn pair(a: usize, b: usize) -> Partition {
    Partition::from_multiset(vec![a, b])
}

/// Cut operator `1/2 sum (a+b) p_a p_b d_{a+b}`.
pub fn cut() -> Operator {
    Operator::schema("C", Some(0), |m| {
        let mut map = TermMap::new();
        for a in 1..m {
            add_into(&mut map, Partition::single(m), pair(a, m - a), frac(m as i64, 2));
        }
        map
    })
}

/// Join operator `1/2 sum ab p_{a+b} d_a d_b`.
pub fn join() -> Operator {
    Operator::schema("J", Some(0), |m| {
        let mut map = TermMap::new();
        for a in 1..m {
            let b = m - a;
            add_into(&mut map, pair(a, b), Partition::single(m), frac((a * b) as i64, 2));
        }
        map
    })
}

fn diagonal(name: &str, weight: impl Fn(usize) -> Q + Send + Sync + 'static) -> Operator {
    Operator::schema(name, Some(0), move |m| {
        let mut map = TermMap::new();
        if m >= 1 {
            add_into(&mut map, Partition::single(m), Partition::single(m), weight(m));
        }
        map
    })
}

/// `D = sum (k-1) k p_k d_k`.
pub fn diag_d() -> Operator {
    diagonal("D", |k| qu((k - 1) * k))
}

/// Grading operator `E = sum k p_k d_k`.
pub fn grading() -> Operator {
    diagonal("E", qu)
}

/// Ladder `E1 = sum m p_{m+1} d_m`.
pub fn ladder() -> Operator {
    Operator::schema("E1", Some(1), |m| {
        let mut map = TermMap::new();
        if m >= 1 {
            add_into(&mut map, Partition::single(m), Partition::single(m + 1), qu(m));
        }
        map
    })
}

/// Classical cut-and-join operator `C + J`.
pub fn cut_and_join() -> Operator {
    cut().plus(&join()).with_name("W2")
}

/// The Gaussian-potential shift `-1/2 sum_k (k+2) p_k d_{k+2}` that the
/// cubic operator picks up when `t_2` is shifted by `-1/2`.
fn w0_shift() -> Operator {
    Operator::schema("W0shift", Some(-2), |m| {
        let mut map = TermMap::new();
        if m >= 3 {
            add_into(&mut map, Partition::single(m), Partition::single(m - 2), frac(-(m as i64), 2));
        }
        map
    })
}

/// `beta C + J + (1-beta)/2 D + beta N E`, optionally with the Gaussian
/// shift term appended.
pub fn w0_beta(beta: &Q, n: &Q, shifted: bool) -> Operator {
    let half = frac(1, 2);
    let one = Q::one();
    let op = cut()
        .combine(beta, &join(), &one)
        .combine(&one, &diag_d(), &((&one - beta) * &half))
        .combine(&one, &grading(), &(beta * n));
    let op = if shifted { op.plus(&w0_shift()) } else { op };
    let tag = if shifted { "W0beta~" } else { "W0beta" };
    op.with_name(format!("{tag}(beta={beta},N={n})"))
}

/// Closed form of `1/2 sum_{n>=1} p_n L_n` with the prefactor `n p_n`
/// read as `n t_n`: `C + beta J + (1-beta)/2 D + (beta N + 1 - beta) E`,
/// plus the Gaussian shift when `shifted`. This is the cubic operator that
/// annihilates the ensemble partition function in the times `t_k = p_k/k`.
pub fn w0_from_ward(beta: &Q, n: &Q, shifted: bool) -> Operator {
    let one = Q::one();
    let op = cut()
        .combine(&one, &join(), beta)
        .combine(&one, &diag_d(), &((&one - beta) / q(2)))
        .combine(&one, &grading(), &(beta * n + &one - beta));
    let op = if shifted { op.plus(&w0_shift()) } else { op };
    op.with_name(format!("W0ward(beta={beta},N={n})"))
}

/// Virasoro generator `L_n` of the Gaussian beta-ensemble written in power
/// sums (`t_k = p_k / k`, `d/dt_k = k d/dp_k`). The zero mode `d/dt_0`
/// acts as multiplication by `N`; `shifted` appends `-d/dt_{n+2}`.
pub fn virasoro(n: i64, beta: &Q, big_n: &Q, shifted: bool) -> Result<Operator> {
    if n < -1 {
        return Err(Error::InvalidParameter(format!(
            "Virasoro index must be >= -1, got {n}"
        )));
    }
    let one = Q::one();
    let linear = ((&one - beta) * q(n + 1) + q(2) * beta * big_n) * q(n);
    let constant = beta * big_n * big_n + (&one - beta) * big_n;
    let (beta, big_n) = (beta.clone(), big_n.clone());
    let degree = if shifted { None } else { Some(-n) };
    let name = format!(
        "{}L{n}(beta={beta},N={big_n})",
        if shifted { "~" } else { "" }
    );
    Ok(Operator::schema(name, degree, move |m| {
        let mut map = TermMap::new();
        let mi = m as i64;
        // sum_k k t_k d/dt_{k+n} = sum_k (k+n) p_k d_{k+n}
        if m >= 1 && mi - n >= 1 {
            let k = (mi - n) as usize;
            add_into(&mut map, Partition::single(m), Partition::single(k), qu(m));
        }
        if m == 0 {
            match n {
                -1 => add_into(&mut map, Partition::empty(), Partition::single(1), big_n.clone()),
                0 => add_into(&mut map, Partition::empty(), Partition::empty(), constant.clone()),
                _ => {}
            }
        }
        // beta sum_{a+b=n} d/dt_a d/dt_b
        if n >= 2 && mi == n {
            for a in 1..m {
                let b = m - a;
                add_into(&mut map, pair(a, b), Partition::empty(), &beta * qu(a * b));
            }
        }
        if n >= 1 && mi == n {
            add_into(&mut map, Partition::single(m), Partition::empty(), linear.clone());
        }
        if shifted && mi == n + 2 {
            add_into(&mut map, Partition::single(m), Partition::empty(), -qu(m));
        }
        map
    }))
}

/// `W^(1) = [W2, E1]`, exact on inputs up to `window`.
pub fn hierarchy_base(window: usize) -> Result<Operator> {
    Ok(commutator(&cut_and_join(), &ladder(), window)?.with_name("W(1)"))
}

/// `W^(n) = ad_{W^(1)}^{n-1}(E1)` (and `W^(1)` itself for `n = 1`),
/// exact on inputs up to `window`.
pub fn hierarchy(n: usize, window: usize) -> Result<Operator> {
    if n == 0 {
        return Err(Error::InvalidParameter("hierarchy index starts at 1".into()));
    }
    let w1 = hierarchy_base(window + n - 1)?;
    if n == 1 {
        return Ok(w1.truncate(window).with_name("W(1)"));
    }
    let mut current = ladder();
    for k in 2..=n {
        let w = window + n - k;
        current = commutator(&w1, &current, w)?.with_name(format!("W({k})"));
    }
    Ok(current)
}

/// Closed form of `W^(1)`: `sum (k+l-1) p_k p_l d_{k+l-1} + sum kl
/// p_{k+l+1} d_k d_l`, both sums over ordered pairs `k, l >= 1`.
pub fn hierarchy_base_closed_form() -> Operator {
    Operator::schema("W(1)closed", Some(1), |m| {
        let mut map = TermMap::new();
        // cut-like part: d_{m} with k + l = m + 1
        if m >= 1 {
            for k in 1..=m {
                let l = m + 1 - k;
                add_into(&mut map, Partition::single(m), pair(k, l), qu(m));
            }
        }
        // join-like part: d_k d_l with k + l = m
        for k in 1..m {
            let l = m - k;
            add_into(&mut map, pair(k, l), Partition::single(m + 1), qu(k * l));
        }
        map
    })
}
