use std::sync::Arc;

use super::oracle::{oracle_apply, oracle_instantiate, OracleValue};
use super::{EvalError, Evaluator};
use crate::ast::{Closure, Env, Name, Term, Ty, Value};

/// How many nested applications `values_agree` explores below a function.
pub const PROBE_DEPTH: usize = 2;

const INT_PROBES: [i64; 3] = [0, 1, -3];

fn succ_body() -> Arc<Term> {
    Arc::new(Term::add(Term::var("p"), Term::int(1)))
}

fn probes() -> Vec<(Value, OracleValue)> {
    let mut out: Vec<_> = INT_PROBES
        .iter()
        .map(|&n| (Value::Int(n), OracleValue::Int(n)))
        .collect();
    out.push((
        Value::Closure(Arc::new(Closure {
            param: Name::from("p"),
            body: succ_body(),
            captured: Env::new(),
        })),
        OracleValue::Lam {
            param: Name::from("p"),
            param_ty: Ty::Int,
            body: succ_body(),
        },
    ));
    out
}

/// Observational agreement between an environment-interpreter value and
/// an oracle value, probing functions `PROBE_DEPTH` applications deep.
pub fn values_agree(ev: &Evaluator, v: &Value, ov: &OracleValue) -> bool {
    values_agree_to_depth(ev, v, ov, PROBE_DEPTH)
}

pub fn values_agree_to_depth(ev: &Evaluator, v: &Value, ov: &OracleValue, depth: usize) -> bool {
    match (v, ov) {
        (Value::Int(a), OracleValue::Int(b)) => a == b,
        (Value::Closure(_), OracleValue::Lam { .. }) => {
            depth == 0
                || probes().iter().all(|(pv, po)| {
                    outcomes_agree(
                        ev,
                        ev.apply(v, pv.clone()),
                        oracle_apply(ov, po, ev.fuel()),
                        depth - 1,
                    )
                })
        }
        (Value::TypeClosure(_), OracleValue::TyLam { .. }) => {
            depth == 0
                || outcomes_agree(
                    ev,
                    ev.instantiate(v),
                    oracle_instantiate(ov, ev.fuel()),
                    depth - 1,
                )
        }
        _ => false,
    }
}

fn outcomes_agree(
    ev: &Evaluator,
    lhs: Result<Value, EvalError>,
    rhs: Result<OracleValue, EvalError>,
    depth: usize,
) -> bool {
    match (lhs, rhs) {
        (Ok(v), Ok(ov)) => values_agree_to_depth(ev, &v, &ov, depth),
        (Err(a), Err(b)) => a.kind == b.kind,
        _ => false,
    }
}
