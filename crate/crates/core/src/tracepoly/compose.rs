use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ncpoly::GenWord;

use super::{OperatorTracePoly, ScalarTracePoly};

/// Substitutes `g[j]` for the `j`-th generator of every component of `f`; trace factors of `f`
/// become traces of the substituted words.
pub fn compose(f: &[OperatorTracePoly], g: &[OperatorTracePoly]) -> Result<Vec<OperatorTracePoly>> {
    let Some(first) = g.first() else {
        return Err(Error::Arity("compose needs at least one inner component".into()));
    };
    let m = first.m();
    if let Some(bad) = g.iter().find(|gi| gi.m() != m) {
        return Err(Error::GeneratorMismatch { left: m, right: bad.m() });
    }
    if let Some(bad) = f.iter().find(|fi| fi.m() != g.len()) {
        return Err(Error::Arity(format!(
            "outer tuple has {} generators but {} inner components were given",
            bad.m(),
            g.len()
        )));
    }

    let mut cache: HashMap<GenWord, OperatorTracePoly> = HashMap::new();
    let mut substitute = |w: &GenWord| -> OperatorTracePoly {
        if let Some(p) = cache.get(w) {
            return p.clone();
        }
        let mut p = OperatorTracePoly::constant(m, 1.0);
        for &l in w.letters() {
            p = p.try_mul(&g[l as usize]).expect("same m");
        }
        cache.insert(w.clone(), p.clone());
        p
    };

    let mut out = Vec::with_capacity(f.len());
    for fi in f {
        let mut acc = OperatorTracePoly::zero(m);
        for ((q, mono), &c) in fi.iter() {
            let mut scalar = ScalarTracePoly::constant(m, c);
            for n in mono.factors() {
                scalar = scalar.try_mul(&substitute(n.word()).trace())?;
            }
            let term = substitute(q).mul_scalar(&scalar)?;
            acc = acc.try_add(&term)?;
        }
        out.push(acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::Coeff;
    use crate::tracepoly::TraceMonomial;

    fn w(letters: &[u8]) -> GenWord {
        GenWord::new(letters.iter().map(|l| l - 1).collect::<Vec<_>>())
    }

    fn op(m: usize, terms: &[(&[u8], &[&[u8]], f64)]) -> OperatorTracePoly {
        OperatorTracePoly::from_terms(
            m,
            terms.iter().map(|(q, traces, c)| {
                let ws: Vec<GenWord> = traces.iter().map(|t| w(t)).collect();
                ((w(q), TraceMonomial::from_words(ws.iter())), Coeff::from(*c))
            }),
        )
        .unwrap()
    }

    #[test]
    fn identity_tuple_is_neutral() {
        let id = vec![op(2, &[(&[1], &[], 1.0)]), op(2, &[(&[2], &[], 1.0)])];
        let g = vec![op(2, &[(&[2], &[&[1]], 1.0), (&[1], &[], 1.0)]), op(2, &[(&[1], &[], 1.0)])];
        assert_eq!(compose(&id, &g).unwrap(), g);
    }

    #[test]
    fn arity_is_checked() {
        let f = vec![op(3, &[(&[3], &[], 1.0)])];
        let g = vec![op(2, &[(&[1], &[], 1.0)]), op(2, &[(&[2], &[], 1.0)])];
        assert!(matches!(compose(&f, &g), Err(Error::Arity(_))));
    }
}
