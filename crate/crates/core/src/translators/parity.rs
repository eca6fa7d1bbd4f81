//! A Σ¹₂ sentence defining even cardinality of a 2n-ary relation over
//! successor structures.

use crate::syntax::{Formula, SoVar, Term};

fn tuple(base: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{base}{i}")).collect()
}

fn terms(vs: &[String]) -> Vec<Term> {
    vs.iter().map(|v| Term::var(v.clone())).collect()
}

fn all(pred: &str, vs: &[String]) -> Formula {
    Formula::and(vs.iter().map(|v| Formula::pred(pred, vec![Term::var(v.clone())])).collect())
}

/// Lexicographic successor on n-tuples: the disjunction over positions i of
/// `u_1=v_1 ∧ … ∧ u_{i-1}=v_{i-1} ∧ succ(u_i,v_i) ∧ last(u_j) ∧ first(v_j)` (j > i).
pub(crate) fn tuple_successor(u: &[String], v: &[String]) -> Formula {
    let k = u.len();
    Formula::or(
        (0..k)
            .map(|i| {
                let mut parts = Vec::new();
                for j in 0..i {
                    parts.push(Formula::eq(Term::var(u[j].clone()), Term::var(v[j].clone())));
                }
                parts.push(Formula::pred(
                    "succ",
                    vec![Term::var(u[i].clone()), Term::var(v[i].clone())],
                ));
                for j in i + 1..k {
                    parts.push(Formula::pred("last", vec![Term::var(u[j].clone())]));
                    parts.push(Formula::pred("first", vec![Term::var(v[j].clone())]));
                }
                Formula::and(parts)
            })
            .collect(),
    )
}

fn xor(a: Formula, b: Formula) -> Formula {
    Formula::iff(a, Formula::not(b))
}

/// The sentence `∃X ∀Y ∀x̄ (φ₁ ∧ φ₂)` over `{p<2n>/2n, succ, first, last}`
/// that holds in a successor structure iff `p<2n>` has an even number of tuples.
///
/// φ₁ forces `X(x̄)` to hold iff row x̄ of the relation has odd size, φ₂ forces
/// `|X|` to be even.
pub fn parity_sentence(n: usize) -> Formula {
    assert!(n >= 1, "parity sentence needs n >= 1");
    let p = format!("p{}", 2 * n);
    let xs = tuple("x", n);
    let ys = tuple("y", n);
    let zs = tuple("z", n);
    let x = |args: &[String]| Formula::pred("X", terms(args));
    let y = |args: &[String]| Formula::pred("Y", terms(args));
    let p_row = |args: &[String]| {
        let mut t = terms(&xs);
        t.extend(terms(args));
        Formula::pred(p.clone(), t)
    };
    let mut yz = ys.clone();
    yz.extend(zs.iter().cloned());

    let phi1 = Formula::implies(
        Formula::and(vec![
            Formula::forall_many(&zs, Formula::implies(all("first", &zs), Formula::iff(y(&zs), p_row(&zs)))),
            Formula::forall_many(
                &yz,
                Formula::implies(tuple_successor(&ys, &zs), Formula::iff(p_row(&zs), xor(y(&ys), y(&zs)))),
            ),
        ]),
        Formula::exists_many(&zs, Formula::and(vec![all("last", &zs), Formula::iff(x(&xs), y(&zs))])),
    );
    let phi2 = Formula::implies(
        Formula::and(vec![
            Formula::forall_many(&zs, Formula::implies(all("first", &zs), Formula::iff(x(&zs), y(&zs)))),
            Formula::forall_many(
                &yz,
                Formula::implies(tuple_successor(&ys, &zs), Formula::iff(x(&zs), xor(y(&ys), y(&zs)))),
            ),
        ]),
        Formula::exists_many(&zs, Formula::and(vec![all("last", &zs), Formula::not(y(&zs))])),
    );
    Formula::so_exists(
        SoVar::predicate("X", n),
        Formula::so_forall(
            SoVar::predicate("Y", n),
            Formula::forall_many(&xs, Formula::and(vec![phi1, phi2])),
        ),
    )
}
