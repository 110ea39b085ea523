//! Cartesian products and their transmissions.
//!
//! In `G □ H` a step changes exactly one coordinate along an edge of its
//! factor, so distances add coordinatewise and
//! `Tr(u, v) = |V_H| Tr_G(u) + |V_G| Tr_H(v)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{classify, TransmissionSpectrum};
use crate::distance::{transmissions, DistanceError, TransmissionProfile};
use crate::error::GraphError;
use crate::graph::Graph;

/// Largest product order built explicitly.
pub const MAX_PRODUCT_ORDER: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("transmission overflow in product")]
    Overflow,
    #[error("first factor is not MTI")]
    NotMti,
    #[error("factor orders {g} and {h} are not coprime (gcd {gcd})")]
    NotCoprime { g: usize, h: usize, gcd: usize },
    #[error("{factor} factor: {source}")]
    Factor {
        factor: &'static str,
        source: DistanceError,
    },
}

/// `G □ H` with vertex `(u, v)` at index `u * |V_H| + v`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Result<Graph, GraphError> {
    let (n, m) = (g.order(), h.order());
    let order = n
        .checked_mul(m)
        .filter(|&o| o <= MAX_PRODUCT_ORDER)
        .ok_or(GraphError::SizeExceeded(n.saturating_mul(m)))?;
    let mut p = Graph::new(order);
    for u in 0..n {
        for (a, b) in h.edges() {
            p.add_edge(u * m + a, u * m + b)?;
        }
    }
    for (a, b) in g.edges() {
        for v in 0..m {
            p.add_edge(a * m + v, b * m + v)?;
        }
    }
    Ok(p)
}

/// Transmissions of `G □ H` from those of the factors.
pub fn product_transmissions(
    tr_g: &TransmissionProfile,
    tr_h: &TransmissionProfile,
) -> Result<TransmissionProfile, ProductError> {
    let (n, m) = (tr_g.order() as u64, tr_h.order() as u64);
    let mut out = Vec::with_capacity(tr_g.order() * tr_h.order());
    for &tg in tr_g.values() {
        for &th in tr_h.values() {
            let t = m
                .checked_mul(tg)
                .zip(n.checked_mul(th))
                .and_then(|(x, y)| x.checked_add(y))
                .ok_or(ProductError::Overflow)?;
            out.push(t);
        }
    }
    Ok(TransmissionProfile::new(out))
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Classification evidence for the product theorem on one pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductReport {
    pub g: TransmissionSpectrum,
    pub h: TransmissionSpectrum,
    pub product: TransmissionSpectrum,
    /// The theorem's conclusion for this pair: TI when `h` is TI, MTI when
    /// `h` is MTI.
    pub predicts_ti: bool,
    pub predicts_mti: bool,
}

impl ProductReport {
    /// Every predicted class is observed.
    pub fn confirmed(&self) -> bool {
        (!self.predicts_ti || self.product.is_ti) && (!self.predicts_mti || self.product.is_mti)
    }
}

/// Checks that an MTI graph `g` and a graph `h` of coprime order give a
/// product that is TI when `h` is TI and MTI when `h` is MTI.
pub fn check_product_theorem(g: &Graph, h: &Graph) -> Result<ProductReport, ProductError> {
    let tr_g = transmissions(g).map_err(|source| ProductError::Factor { factor: "first", source })?;
    let tr_h = transmissions(h).map_err(|source| ProductError::Factor { factor: "second", source })?;
    let sg = classify(&tr_g);
    if !sg.is_mti {
        return Err(ProductError::NotMti);
    }
    let d = gcd(g.order(), h.order());
    if d != 1 {
        return Err(ProductError::NotCoprime {
            g: g.order(),
            h: h.order(),
            gcd: d,
        });
    }
    let sh = classify(&tr_h);
    let product = classify(&product_transmissions(&tr_g, &tr_h)?);
    Ok(ProductReport {
        predicts_ti: sh.is_ti,
        predicts_mti: sh.is_mti,
        g: sg,
        h: sh,
        product,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::dobrynin;

    #[test]
    fn square_of_k2() {
        let k2 = Graph::complete(2);
        let c4 = cartesian_product(&k2, &k2).unwrap();
        assert_eq!(c4.edge_count(), 4);
        let tr = transmissions(&k2).unwrap();
        assert_eq!(product_transmissions(&tr, &tr).unwrap().values(), &[4, 4, 4, 4]);
    }

    #[test]
    fn dobrynin_pair() {
        let (g, h) = (dobrynin(1), dobrynin(2));
        let report = check_product_theorem(&g, &h).unwrap();
        assert_eq!(report.product.order, 63);
        assert!(report.product.is_mti && report.confirmed());
        let bfs = transmissions(&cartesian_product(&g, &h).unwrap()).unwrap();
        let formula =
            product_transmissions(&transmissions(&g).unwrap(), &transmissions(&h).unwrap()).unwrap();
        assert_eq!(bfs, formula);
        assert_eq!(
            check_product_theorem(&g, &g),
            Err(ProductError::NotCoprime { g: 7, h: 7, gcd: 7 })
        );
        assert_eq!(check_product_theorem(&Graph::complete(3), &g), Err(ProductError::NotMti));
    }

    #[test]
    fn overflow_is_reported() {
        let big = TransmissionProfile::new(vec![u64::MAX / 2, 1]);
        assert_eq!(product_transmissions(&big, &big), Err(ProductError::Overflow));
    }
}
