use super::{AngleExpr, Circuit, Gate};

enum Step {
    Keep,
    Cancel,
    Replace(Gate),
}

fn combine(prev: &Gate, next: &Gate) -> Step {
    match (prev, next) {
        (Gate::X(a), Gate::X(b)) | (Gate::H(a), Gate::H(b)) if a == b => Step::Cancel,
        (Gate::Cnot { control: c1, target: t1 }, Gate::Cnot { control: c2, target: t2 }) if c1 == c2 && t1 == t2 => {
            Step::Cancel
        }
        (Gate::Rx(a, x), Gate::Rx(b, y)) if a == b => merged(x, y, |e| Gate::Rx(*a, e)),
        (Gate::Ry(a, x), Gate::Ry(b, y)) if a == b => merged(x, y, |e| Gate::Ry(*a, e)),
        (Gate::Rz(a, x), Gate::Rz(b, y)) if a == b => merged(x, y, |e| Gate::Rz(*a, e)),
        _ => Step::Keep,
    }
}

fn merged(x: &AngleExpr, y: &AngleExpr, make: impl Fn(AngleExpr) -> Gate) -> Step {
    match x.merge(y) {
        Some(e) if e.is_zero() => Step::Cancel,
        Some(e) => Step::Replace(make(e)),
        None => Step::Keep,
    }
}

fn single_pass(gates: &[Gate], n_qubits: usize) -> Vec<Gate> {
    let mut out: Vec<Option<Gate>> = Vec::with_capacity(gates.len());
    // indices into `out` of live gates touching each qubit, most recent last
    let mut stacks: Vec<Vec<usize>> = vec![Vec::new(); n_qubits];

    for g in gates {
        if g.angle().is_some_and(AngleExpr::is_zero) {
            continue;
        }
        let (a, b) = g.qubits();
        let top = stacks[a].last().copied();
        // the previous gate must be the latest on every qubit this one touches
        let adjacent = top.filter(|&i| {
            let (pa, pb) = out[i].expect("live gate").qubits();
            pa == a && pb == b && b.is_none_or(|b| stacks[b].last() == Some(&i))
        });
        let step = adjacent.map_or(Step::Keep, |i| combine(&out[i].expect("live gate"), g));
        match (step, adjacent) {
            (Step::Cancel, Some(i)) => {
                out[i] = None;
                stacks[a].pop();
                if let Some(b) = b {
                    stacks[b].pop();
                }
            }
            (Step::Replace(new), Some(i)) => out[i] = Some(new),
            _ => {
                let i = out.len();
                out.push(Some(*g));
                stacks[a].push(i);
                if let Some(b) = b {
                    stacks[b].push(i);
                }
            }
        }
    }
    out.into_iter().flatten().collect()
}

/// Local cancellation pass: removes adjacent inverse pairs of self-inverse
/// gates, merges adjacent same-axis rotations whose angles combine into one
/// expression, and drops zero rotations. Repeats until nothing changes.
pub fn peephole(c: &Circuit) -> Circuit {
    let mut gates = c.gates.clone();
    loop {
        let next = single_pass(&gates, c.n_qubits);
        if next == gates {
            break;
        }
        gates = next;
    }
    Circuit { n_qubits: c.n_qubits, n_params: c.n_params, gates }
}
