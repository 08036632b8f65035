use super::member::PoolView;

/// Incrementally maintained candidate pool of one member: the partial
/// offers outside the team's forbidden set whose best completion reaches the
/// member's aspiration. Aspirations only fall during a run, so the pool only
/// grows; a Fenwick tree gives canonical-order rank queries.
#[derive(Clone, Debug)]
pub(crate) struct CandidatePool {
    /// Allowed ids by descending best completion, ties by ascending id.
    order: Vec<u32>,
    best_completion: Vec<f64>,
    cursor: usize,
    level: f64,
    member: Vec<bool>,
    tree: Vec<u32>,
}

impl CandidatePool {
    pub fn new(best_completion: Vec<f64>, forbidden: &[bool]) -> Self {
        let mut order: Vec<u32> = (0..best_completion.len() as u32)
            .filter(|&i| !forbidden[i as usize])
            .collect();
        order.sort_by(|&a, &b| {
            best_completion[b as usize]
                .total_cmp(&best_completion[a as usize])
                .then(a.cmp(&b))
        });
        let n = best_completion.len();
        CandidatePool {
            order,
            best_completion,
            cursor: 0,
            level: f64::INFINITY,
            member: vec![false; n],
            tree: vec![0; n + 1],
        }
    }

    /// Brings the pool to aspiration `s`.
    pub fn update(&mut self, s: f64) {
        if s > self.level {
            self.reset();
        }
        self.level = s;
        while self.cursor < self.order.len() {
            let id = self.order[self.cursor] as usize;
            if self.best_completion[id] < s {
                break;
            }
            self.insert(id);
            self.cursor += 1;
        }
    }

    fn reset(&mut self) {
        self.cursor = 0;
        self.member.iter_mut().for_each(|m| *m = false);
        self.tree.iter_mut().for_each(|x| *x = 0);
    }

    fn insert(&mut self, id: usize) {
        self.member[id] = true;
        let mut i = id + 1;
        while i < self.tree.len() {
            self.tree[i] += 1;
            i += i & i.wrapping_neg();
        }
    }

    /// Allowed id with the highest best completion (lowest id on ties), if
    /// any partial offer is allowed at all.
    pub fn fallback(&self) -> Option<usize> {
        self.order.first().map(|&i| i as usize)
    }
}

impl PoolView for CandidatePool {
    fn len(&self) -> usize {
        self.cursor
    }

    fn nth(&self, k: usize) -> usize {
        // Smallest position whose prefix count exceeds k.
        let n = self.tree.len() - 1;
        let mut pos = 0;
        let mut rem = k as u32;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= rem {
                pos = next;
                rem -= self.tree[next];
            }
            step >>= 1;
        }
        pos
    }

    fn for_each(&self, f: &mut dyn FnMut(usize)) {
        for (id, &m) in self.member.iter().enumerate() {
            if m {
                f(id);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_queries_follow_canonical_order() {
        let bc = vec![0.9, 0.2, 0.7, 0.95, 0.5, 0.7];
        let forbidden = vec![false, false, false, true, false, false];
        let mut p = CandidatePool::new(bc, &forbidden);
        assert_eq!(p.fallback(), Some(0));
        p.update(0.6);
        let mut ids = Vec::new();
        p.for_each(&mut |i| ids.push(i));
        assert_eq!(ids, vec![0, 2, 5]);
        assert_eq!((0..p.len()).map(|k| p.nth(k)).collect::<Vec<_>>(), ids);
        p.update(0.1);
        assert_eq!((0..p.len()).map(|k| p.nth(k)).collect::<Vec<_>>(), vec![0, 1, 2, 4, 5]);
        p.update(0.8);
        assert_eq!(p.len(), 1);
        assert_eq!(p.nth(0), 0);
    }
}
