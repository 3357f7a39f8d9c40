//! Grammatical reduction: greedy stack contraction plus a complete
//! backtracking search.
//!
//! A reduction removes adjacent cancelable pairs `a^(z) a^(z+1)` (equal
//! base) until no more apply. Because `a^(z) a^(z+1) a^(z+2)` can cancel
//! in two distinct ways, the greedy pass is not confluent; the search
//! recovers any planar reduction the greedy pass misses.

use std::collections::HashMap;

use super::PregroupType;

/// A set of cups over a type, with the indices that survive.
///
/// Links are stored as `(i, j)` with `i < j`; each links `a^(z)` at `i`
/// to `a^(z+1)` at `j` with equal base. Links never cross and every
/// position inside a link is itself linked (cups cancel adjacently once
/// inner material is gone).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReductionPlan {
    pub links: Vec<(usize, usize)>,
    pub residual: Vec<usize>,
}

impl ReductionPlan {
    /// Check the plan's structural invariants against the type it reduces.
    /// Returns an error message on the first violation.
    pub fn validate(&self, ty: &PregroupType) -> std::result::Result<(), String> {
        let n = ty.len();
        let mut seen = vec![0u8; n];
        for &(i, j) in &self.links {
            if i >= j || j >= n {
                return Err(format!("link ({i},{j}) out of order or range"));
            }
            let a = &ty.atoms[i];
            let b = &ty.atoms[j];
            if !a.cancels_with(b) {
                return Err(format!("link ({i},{j}) joins non-cancelable atoms {a} {b}"));
            }
            seen[i] += 1;
            seen[j] += 1;
        }
        for &r in &self.residual {
            if r >= n {
                return Err(format!("residual index {r} out of range"));
            }
            seen[r] += 1;
        }
        if seen.iter().any(|&c| c != 1) {
            return Err("links and residual do not partition the positions".into());
        }
        for (a, &(i, j)) in self.links.iter().enumerate() {
            for &(k, l) in &self.links[a + 1..] {
                let crossing = (i < k && k < j && j < l) || (k < i && i < l && l < j);
                if crossing {
                    return Err(format!("links ({i},{j}) and ({k},{l}) cross"));
                }
            }
        }
        // residual must be increasing
        if self.residual.windows(2).any(|w| w[0] >= w[1]) {
            return Err("residual indices not strictly increasing".into());
        }
        Ok(())
    }

    /// The type left over after deleting linked positions.
    pub fn residual_type(&self, ty: &PregroupType) -> PregroupType {
        PregroupType::new(
            self.residual
                .iter()
                .map(|&i| ty.atoms[i].clone())
                .collect(),
        )
    }
}

/// Single left-to-right pass with a stack: an incoming `a^(z+1)` cancels
/// a stack-top `a^(z)` with the same base. Returns the plan and the
/// residual type. Irreducible input comes back with an empty link set.
pub fn reduce_greedy(ty: &PregroupType) -> (ReductionPlan, PregroupType) {
    let mut stack: Vec<usize> = Vec::new();
    let mut links = Vec::new();
    for (j, atom) in ty.atoms.iter().enumerate() {
        match stack.last() {
            Some(&i) if ty.atoms[i].cancels_with(atom) => {
                stack.pop();
                links.push((i, j));
            }
            _ => stack.push(j),
        }
    }
    links.sort_unstable();
    let plan = ReductionPlan {
        links,
        residual: stack,
    };
    let residual = plan.residual_type(ty);
    (plan, residual)
}

/// Backtracking search for a planar reduction of `ty` onto `target`.
///
/// Returns some plan whose residual equals `target` (atoms compared
/// exactly, adjoint orders included), or `None` when no planar cup set
/// achieves it. Complete where the greedy pass is not: `n^l n n^r` can
/// reduce to either `n^r` or `n^l` depending on which pair is cut.
pub fn search_reduction(ty: &PregroupType, target: &PregroupType) -> Option<ReductionPlan> {
    let n = ty.len();
    let m = target.len();
    if m > n || (n - m) % 2 != 0 {
        return None;
    }
    let mut memo = HashMap::new();
    // choose[k][p]: can positions p.. provide target atoms k.. with all gaps
    // fully reducible. Explored lazily with backtracking so the first
    // witness found is returned.
    fn fully_reduces(
        ty: &PregroupType,
        i: usize,
        j: usize, // half-open [i, j)
        memo: &mut HashMap<(usize, usize), bool>,
    ) -> bool {
        if i >= j {
            return true;
        }
        if (j - i) % 2 != 0 {
            return false;
        }
        if let Some(&hit) = memo.get(&(i, j)) {
            return hit;
        }
        let mut ok = false;
        let mut k = i + 1;
        while k < j {
            if ty.atoms[i].cancels_with(&ty.atoms[k])
                && fully_reduces(ty, i + 1, k, memo)
                && fully_reduces(ty, k + 1, j, memo)
            {
                ok = true;
                break;
            }
            k += 2;
        }
        memo.insert((i, j), ok);
        ok
    }

    fn emit_links(
        ty: &PregroupType,
        i: usize,
        j: usize,
        memo: &mut HashMap<(usize, usize), bool>,
        links: &mut Vec<(usize, usize)>,
    ) {
        if i >= j {
            return;
        }
        let mut k = i + 1;
        while k < j {
            if ty.atoms[i].cancels_with(&ty.atoms[k])
                && fully_reduces(ty, i + 1, k, memo)
                && fully_reduces(ty, k + 1, j, memo)
            {
                links.push((i, k));
                emit_links(ty, i + 1, k, memo, links);
                emit_links(ty, k + 1, j, memo, links);
                return;
            }
            k += 2;
        }
        unreachable!("emit_links called on a segment that does not fully reduce");
    }

    // pick residual positions left to right
    fn pick(
        ty: &PregroupType,
        target: &PregroupType,
        pos: usize,
        k: usize,
        chosen: &mut Vec<usize>,
        memo: &mut HashMap<(usize, usize), bool>,
    ) -> bool {
        if k == target.len() {
            return fully_reduces(ty, pos, ty.len(), memo);
        }
        let mut p = pos;
        while p < ty.len() {
            if ty.atoms[p] == target.atoms[k] && fully_reduces(ty, pos, p, memo) {
                chosen.push(p);
                if pick(ty, target, p + 1, k + 1, chosen, memo) {
                    return true;
                }
                chosen.pop();
            }
            p += 1;
        }
        false
    }

    let mut residual = Vec::new();
    if !pick(ty, target, 0, 0, &mut residual, &mut memo) {
        return None;
    }
    let mut links = Vec::new();
    let mut prev = 0;
    for &r in &residual {
        emit_links(ty, prev, r, &mut memo, &mut links);
        prev = r + 1;
    }
    emit_links(ty, prev, n, &mut memo, &mut links);
    links.sort_unstable();
    Some(ReductionPlan { links, residual })
}
