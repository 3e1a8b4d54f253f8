//! Buchberger's algorithm over an arbitrary coefficient field.
//!
//! Monomials are stored in a flat `u16` layout: each block of the order
//! contributes its degree followed by its exponents in reverse variable
//! order. Multiplication is slotwise addition and comparison is a single
//! left-to-right scan.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::time::Instant;

use super::field::Field;
use super::{Budget, TraceEvent};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub nvars: usize,
    pub stride: usize,
    slot: Vec<usize>,
    deg_slot: Vec<bool>,
    block_of: Vec<usize>,
    block_deg: Vec<usize>,
}

impl Layout {
    pub fn new(nvars: usize, blocks: &[Vec<usize>]) -> Self {
        let mut slot = vec![usize::MAX; nvars];
        let mut deg_slot = Vec::new();
        let mut block_of = vec![usize::MAX; nvars];
        let mut block_deg = Vec::new();
        for (b, block) in blocks.iter().enumerate() {
            block_deg.push(deg_slot.len());
            deg_slot.push(true);
            for &v in block.iter().rev() {
                slot[v] = deg_slot.len();
                block_of[v] = b;
                deg_slot.push(false);
            }
        }
        assert!(slot.iter().all(|&s| s != usize::MAX), "blocks must cover all variables");
        Layout {
            nvars,
            stride: deg_slot.len(),
            slot,
            deg_slot,
            block_of,
            block_deg,
        }
    }

    pub fn encode(&self, exps: &[u32]) -> Vec<u16> {
        let mut m = vec![0u16; self.stride];
        for (v, &e) in exps.iter().enumerate() {
            let e: u16 = e.try_into().expect("exponent fits in 16 bits");
            m[self.slot[v]] = e;
            m[self.block_deg[self.block_of[v]]] += e;
        }
        m
    }

    pub fn decode(&self, m: &[u16]) -> Vec<u32> {
        (0..self.nvars).map(|v| m[self.slot[v]] as u32).collect()
    }

    #[inline]
    pub fn cmp(&self, a: &[u16], b: &[u16]) -> Ordering {
        for i in 0..self.stride {
            if a[i] != b[i] {
                return if self.deg_slot[i] {
                    a[i].cmp(&b[i])
                } else {
                    b[i].cmp(&a[i])
                };
            }
        }
        Ordering::Equal
    }

    /// Sort key whose lexicographic order is the monomial order.
    fn key(&self, m: &[u16]) -> Vec<u16> {
        m.iter()
            .zip(&self.deg_slot)
            .map(|(&x, &d)| if d { x } else { u16::MAX - x })
            .collect()
    }

    fn unkey(&self, k: &[u16], out: &mut [u16]) {
        for i in 0..self.stride {
            out[i] = if self.deg_slot[i] { k[i] } else { u16::MAX - k[i] };
        }
    }

    pub fn degree(&self, m: &[u16]) -> u32 {
        self.block_deg.iter().map(|&s| m[s] as u32).sum()
    }

    fn mask(&self, m: &[u16]) -> u64 {
        let mut bits = 0u64;
        for v in 0..self.nvars {
            if m[self.slot[v]] > 0 {
                bits |= 1 << (v % 64);
            }
        }
        bits
    }

    pub fn var_slot(&self, v: usize) -> usize {
        self.slot[v]
    }
}

#[inline]
fn divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Polynomial with terms in strictly decreasing order.
#[derive(Debug, Clone)]
pub(crate) struct Poly<E> {
    pub mons: Vec<u16>,
    pub cs: Vec<E>,
    pub sugar: u32,
}

impl<E: Clone> Poly<E> {
    pub fn len(&self) -> usize {
        self.cs.len()
    }

    pub fn mon(&self, i: usize, stride: usize) -> &[u16] {
        &self.mons[i * stride..(i + 1) * stride]
    }

    fn empty(sugar: u32) -> Self {
        Poly {
            mons: Vec::new(),
            cs: Vec::new(),
            sugar,
        }
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Vec<u16>,
    sugar: u32,
}

pub(crate) struct Engine<'a, F: Field> {
    f: &'a F,
    lay: &'a Layout,
    polys: Vec<Poly<F::E>>,
    masks: Vec<u64>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    budget: Budget,
    start: Instant,
    processed: usize,
    zero_reductions: usize,
    pub trace: Vec<TraceEvent>,
}

impl<'a, F: Field> Engine<'a, F> {
    pub fn new(f: &'a F, lay: &'a Layout, budget: Budget) -> Self {
        Engine {
            f,
            lay,
            polys: Vec::new(),
            masks: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
            budget,
            start: Instant::now(),
            processed: 0,
            zero_reductions: 0,
            trace: Vec::new(),
        }
    }

    /// Sorts and merges raw terms into a polynomial.
    pub fn make_poly(&self, mut terms: Vec<(Vec<u16>, F::E)>) -> Poly<F::E> {
        terms.sort_by(|a, b| self.lay.cmp(&b.0, &a.0));
        let mut p = Poly::empty(0);
        let s = self.lay.stride;
        for (m, c) in terms {
            if p.len() > 0 && p.mon(p.len() - 1, s) == &m[..] {
                let last = p.cs.len() - 1;
                p.cs[last] = self.f.add(&p.cs[last], &c);
                if self.f.is_zero(&p.cs[last]) {
                    p.cs.pop();
                    p.mons.truncate(p.mons.len() - s);
                }
            } else if !self.f.is_zero(&c) {
                p.mons.extend_from_slice(&m);
                p.cs.push(c);
            }
        }
        p.sugar = (0..p.len()).map(|i| self.lay.degree(p.mon(i, s))).max().unwrap_or(0);
        p
    }

    fn check_budget(&self) -> Result<()> {
        if let Some(d) = self.budget.deadline {
            if Instant::now() >= d {
                return Err(Error::BudgetExhausted(format!(
                    "wall-clock limit reached after {} pairs (basis size {})",
                    self.processed,
                    self.polys.len()
                )));
            }
        }
        if let Some(mp) = self.budget.max_pairs {
            if self.processed >= mp {
                return Err(Error::BudgetExhausted(format!("pair limit {mp} reached")));
            }
        }
        if let Some(mb) = self.budget.max_basis {
            if self.polys.len() > mb {
                return Err(Error::BudgetExhausted(format!("basis size limit {mb} reached")));
            }
        }
        Ok(())
    }

    /// `a[a_from..] - c * m * g[g_from..]`.
    fn axpy(&self, a: &Poly<F::E>, a_from: usize, c: &F::E, m: &[u16], g: &Poly<F::E>, g_from: usize) -> Poly<F::E> {
        let s = self.lay.stride;
        let na = a.len() - a_from;
        let ng = g.len() - g_from;
        let mut out = Poly {
            mons: Vec::with_capacity((na + ng) * s),
            cs: Vec::with_capacity(na + ng),
            sugar: a.sugar.max(g.sugar + self.lay.degree(m)),
        };
        let negc = self.f.neg(c);
        let mut buf = vec![0u16; s];
        let mut i = a_from;
        let mut j = g_from;
        let mut have_g = false;
        while i < a.len() || j < g.len() {
            if j < g.len() && !have_g {
                let gm = g.mon(j, s);
                for k in 0..s {
                    buf[k] = gm[k] + m[k];
                }
                have_g = true;
            }
            let ord = if i >= a.len() {
                Ordering::Less
            } else if j >= g.len() {
                Ordering::Greater
            } else {
                self.lay.cmp(a.mon(i, s), &buf)
            };
            match ord {
                Ordering::Greater => {
                    out.mons.extend_from_slice(a.mon(i, s));
                    out.cs.push(a.cs[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.mons.extend_from_slice(&buf);
                    out.cs.push(self.f.mul(&negc, &g.cs[j]));
                    j += 1;
                    have_g = false;
                }
                Ordering::Equal => {
                    let v = self.f.sub(&a.cs[i], &self.f.mul(c, &g.cs[j]));
                    if !self.f.is_zero(&v) {
                        out.mons.extend_from_slice(&buf);
                        out.cs.push(v);
                    }
                    i += 1;
                    j += 1;
                    have_g = false;
                }
            }
        }
        out
    }

    fn find_reducer(&self, m: &[u16], skip: Option<usize>) -> Option<usize> {
        let mask = self.lay.mask(m);
        let s = self.lay.stride;
        for (k, g) in self.polys.iter().enumerate() {
            if !self.active[k] || Some(k) == skip {
                continue;
            }
            if self.masks[k] & !mask != 0 {
                continue;
            }
            if divides(g.mon(0, s), m) {
                return Some(k);
            }
        }
        None
    }

    /// Full reduction against the active basis; reducers are monic.
    ///
    /// Pending terms sit in a max-heap keyed by the order, with their
    /// coefficients in a hash map, so one step costs the reducer's length
    /// rather than the length of the whole remainder.
    fn reduce(&self, p: Poly<F::E>, skip: Option<usize>) -> Result<Poly<F::E>> {
        let s = self.lay.stride;
        let mut out = Poly::empty(p.sugar);
        let mut coeffs: HashMap<Vec<u16>, F::E> = HashMap::with_capacity(p.len() * 2);
        let mut heap: BinaryHeap<Vec<u16>> = BinaryHeap::with_capacity(p.len() * 2);
        for i in 0..p.len() {
            let key = self.lay.key(p.mon(i, s));
            heap.push(key.clone());
            coeffs.insert(key, p.cs[i].clone());
        }
        let mut steps = 0usize;
        let mut m = vec![0u16; s];
        let mut q = vec![0u16; s];
        let mut buf = vec![0u16; s];
        while let Some(key) = heap.pop() {
            let c = coeffs.remove(&key).expect("heap and map agree");
            if self.f.is_zero(&c) {
                continue;
            }
            self.lay.unkey(&key, &mut m);
            match self.find_reducer(&m, skip) {
                Some(k) => {
                    let g = &self.polys[k];
                    let gm = g.mon(0, s);
                    for x in 0..s {
                        q[x] = m[x] - gm[x];
                    }
                    out.sugar = out.sugar.max(g.sugar + self.lay.degree(&q));
                    let negc = self.f.neg(&c);
                    for j in 1..g.len() {
                        let tm = g.mon(j, s);
                        for x in 0..s {
                            buf[x] = tm[x] + q[x];
                        }
                        let delta = self.f.mul(&negc, &g.cs[j]);
                        let tk = self.lay.key(&buf);
                        match coeffs.get_mut(&tk) {
                            Some(v) => *v = self.f.add(v, &delta),
                            None => {
                                heap.push(tk.clone());
                                coeffs.insert(tk, delta);
                            }
                        }
                    }
                    steps += 1;
                    if steps % 16 == 0 {
                        self.check_budget()?;
                    }
                }
                None => {
                    out.mons.extend_from_slice(&m);
                    out.cs.push(c);
                }
            }
        }
        Ok(out)
    }

    fn monic(&self, p: &mut Poly<F::E>) {
        if p.len() == 0 {
            return;
        }
        let inv = self.f.inv(&p.cs[0]);
        for c in p.cs.iter_mut() {
            *c = self.f.mul(c, &inv);
        }
    }

    fn lcm(&self, a: &[u16], b: &[u16]) -> Vec<u16> {
        let mut out = vec![0u16; self.lay.stride];
        for v in 0..self.lay.nvars {
            let s = self.lay.var_slot(v);
            out[s] = a[s].max(b[s]);
        }
        for &d in &self.lay.block_deg {
            out[d] = 0;
        }
        for v in 0..self.lay.nvars {
            let s = self.lay.var_slot(v);
            out[self.lay.block_deg[self.lay.block_of[v]]] += out[s];
        }
        out
    }

    fn coprime(&self, a: &[u16], b: &[u16]) -> bool {
        (0..self.lay.nvars).all(|v| {
            let s = self.lay.var_slot(v);
            a[s] == 0 || b[s] == 0
        })
    }

    /// Gebauer–Möller update after adding basis element `h`.
    fn update(&mut self, h: usize) {
        let s = self.lay.stride;
        let lh = self.polys[h].mon(0, s).to_vec();
        let hsugar = self.polys[h].sugar;
        let mut cands: Vec<(usize, Vec<u16>, bool, u32)> = Vec::new();
        for g in 0..h {
            if !self.active[g] {
                continue;
            }
            let lg = self.polys[g].mon(0, s);
            let l = self.lcm(&lh, lg);
            let cop = self.coprime(&lh, lg);
            let dl = self.lay.degree(&l);
            let sug = (hsugar + dl - self.lay.degree(&lh)).max(self.polys[g].sugar + dl - self.lay.degree(lg));
            cands.push((g, l, cop, sug));
        }
        // criterion M: drop (h,g) if some other (h,g2) has lcm properly dividing it
        let mut keep = vec![true; cands.len()];
        for a in 0..cands.len() {
            if cands[a].2 {
                continue;
            }
            for b in 0..cands.len() {
                if a == b || !keep[b] {
                    continue;
                }
                if divides(&cands[b].1, &cands[a].1) && (cands[b].1 != cands[a].1 || b < a) {
                    keep[a] = false;
                    break;
                }
            }
        }
        // criterion F already folded into the equal-lcm tie-break above;
        // the product criterion drops coprime pairs
        let new_pairs: Vec<Pair> = cands
            .into_iter()
            .zip(keep)
            .filter(|(c, k)| *k && !c.2)
            .map(|(c, _)| Pair {
                i: c.0,
                j: h,
                lcm: c.1,
                sugar: c.3,
            })
            .collect();
        // criterion B on old pairs
        let polys = &self.polys;
        let lay = self.lay;
        self.pairs.retain(|p| {
            if !divides(&lh, &p.lcm) {
                return true;
            }
            let li = polys[p.i].mon(0, s);
            let lj = polys[p.j].mon(0, s);
            let lih = lcm_plain(lay, li, &lh);
            let ljh = lcm_plain(lay, lj, &lh);
            lih == p.lcm || ljh == p.lcm
        });
        self.pairs.extend(new_pairs);
        for g in 0..h {
            if self.active[g] && divides(&lh, self.polys[g].mon(0, s)) {
                self.active[g] = false;
            }
        }
    }

    fn add_basis(&mut self, mut p: Poly<F::E>) -> usize {
        self.monic(&mut p);
        let s = self.lay.stride;
        self.masks.push(self.lay.mask(p.mon(0, s)));
        self.polys.push(p);
        self.active.push(true);
        let h = self.polys.len() - 1;
        self.update(h);
        h
    }

    fn spoly(&self, pair: &Pair) -> Poly<F::E> {
        let s = self.lay.stride;
        let gi = &self.polys[pair.i];
        let gj = &self.polys[pair.j];
        let mi: Vec<u16> = pair.lcm.iter().zip(gi.mon(0, s)).map(|(a, b)| a - b).collect();
        let mj: Vec<u16> = pair.lcm.iter().zip(gj.mon(0, s)).map(|(a, b)| a - b).collect();
        // mi*gi - mj*gj with the leading terms cancelled
        let zero = Poly::empty(0);
        let one = self.f.one();
        let neg_one = self.f.neg(&one);
        let a = self.axpy(&zero, 0, &neg_one, &mi, gi, 1);
        let mut out = self.axpy(&a, 0, &one, &mj, gj, 1);
        out.sugar = pair.sugar;
        out
    }

    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let lay = self.lay;
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            let ord = a
                .sugar
                .cmp(&b.sugar)
                .then_with(|| lay.cmp(&a.lcm, &b.lcm))
                .then_with(|| (a.j, a.i).cmp(&(b.j, b.i)));
            if ord == Ordering::Less {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    fn record(&mut self) {
        let basis = self.active.iter().filter(|a| **a).count();
        self.trace.push(TraceEvent {
            pairs_processed: self.processed,
            basis_size: basis,
            pending_pairs: self.pairs.len(),
            zero_reductions: self.zero_reductions,
            millis: self.start.elapsed().as_millis() as u64,
        });
        if std::env::var_os("CATALYTIC_TRACE").is_some() {
            eprintln!("groebner: {:?}", self.trace.last().unwrap());
        }
    }

    /// Runs the algorithm and returns the reduced basis, sorted by leading
    /// monomial ascending.
    pub fn run(mut self, gens: Vec<Poly<F::E>>) -> Result<(Vec<Poly<F::E>>, Vec<TraceEvent>)> {
        let s = self.lay.stride;
        let mut gens: Vec<Poly<F::E>> = gens.into_iter().filter(|g| g.len() > 0).collect();
        gens.sort_by(|a, b| self.lay.cmp(a.mon(0, s), b.mon(0, s)));
        for g in gens {
            let r = self.reduce(g, None)?;
            if r.len() > 0 {
                let unit = self.lay.degree(r.mon(0, s)) == 0;
                self.add_basis(r);
                if unit {
                    return Ok(self.finish_unit());
                }
            }
        }
        self.record();
        while let Some(pair) = self.select() {
            self.check_budget()?;
            self.processed += 1;
            let sp = self.spoly(&pair);
            let r = self.reduce(sp, None)?;
            if r.len() == 0 {
                self.zero_reductions += 1;
            } else {
                let unit = self.lay.degree(r.mon(0, s)) == 0;
                self.add_basis(r);
                if unit {
                    return Ok(self.finish_unit());
                }
            }
            if self.processed % 50 == 0 {
                self.record();
            }
        }
        self.record();
        // interreduce
        let idx: Vec<usize> = (0..self.polys.len()).filter(|&k| self.active[k]).collect();
        let mut out = Vec::with_capacity(idx.len());
        for &k in &idx {
            let g = self.polys[k].clone();
            let lead = Poly {
                mons: g.mon(0, s).to_vec(),
                cs: vec![g.cs[0].clone()],
                sugar: g.sugar,
            };
            let tail = Poly {
                mons: g.mons[s..].to_vec(),
                cs: g.cs[1..].to_vec(),
                sugar: g.sugar,
            };
            let tail = self.reduce(tail, Some(k))?;
            let mut full = lead;
            full.mons.extend_from_slice(&tail.mons);
            full.cs.extend(tail.cs);
            out.push(full);
        }
        out.sort_by(|a, b| self.lay.cmp(a.mon(0, s), b.mon(0, s)));
        let trace = std::mem::take(&mut self.trace);
        Ok((out, trace))
    }

    /// Installs an already reduced basis without generating pairs.
    pub fn load(&mut self, basis: Vec<Poly<F::E>>) {
        let s = self.lay.stride;
        for p in basis {
            self.masks.push(self.lay.mask(p.mon(0, s)));
            self.polys.push(p);
            self.active.push(true);
        }
    }

    /// Minimal polynomial of variable `v` in the quotient by the loaded
    /// basis, ascending and monic. `None` when its degree would exceed
    /// `max_degree` (for instance when the quotient is infinite).
    pub fn minimal_polynomial(&self, v: usize, max_degree: usize) -> Result<Option<Vec<F::E>>> {
        let s = self.lay.stride;
        let f = self.f;
        let mut x = vec![0u32; self.lay.nvars];
        x[v] = 1;
        let step = self.lay.encode(&x);
        let mut columns: HashMap<Vec<u16>, usize> = HashMap::new();
        // echelon rows: (dense vector, pivot column, combination of powers)
        let mut rows: Vec<(Vec<F::E>, usize, Vec<F::E>)> = Vec::new();
        let mut cur = self.make_poly(vec![(vec![0u16; s], f.one())]);
        for d in 0..=max_degree {
            self.check_budget()?;
            for i in 0..cur.len() {
                let n = columns.len();
                columns.entry(cur.mon(i, s).to_vec()).or_insert(n);
            }
            let mut vec = vec![f.zero(); columns.len()];
            for i in 0..cur.len() {
                vec[columns[cur.mon(i, s)]] = cur.cs[i].clone();
            }
            let mut comb = vec![f.zero(); d + 1];
            comb[d] = f.one();
            for (row, piv, rc) in &rows {
                if vec.len() <= *piv || f.is_zero(&vec[*piv]) {
                    continue;
                }
                let c = vec[*piv].clone();
                for (k, x) in row.iter().enumerate() {
                    vec[k] = f.sub(&vec[k], &f.mul(&c, x));
                }
                for (k, x) in rc.iter().enumerate() {
                    comb[k] = f.sub(&comb[k], &f.mul(&c, x));
                }
            }
            match vec.iter().position(|c| !f.is_zero(c)) {
                None => return Ok(Some(comb)),
                Some(piv) => {
                    let inv = f.inv(&vec[piv]);
                    let vec: Vec<F::E> = vec.iter().map(|c| f.mul(c, &inv)).collect();
                    let comb: Vec<F::E> = comb.iter().map(|c| f.mul(c, &inv)).collect();
                    rows.push((vec, piv, comb));
                }
            }
            let mut next = cur.clone();
            for i in 0..next.len() {
                for k in 0..s {
                    next.mons[i * s + k] += step[k];
                }
            }
            cur = self.reduce(next, None)?;
        }
        Ok(None)
    }

    fn finish_unit(mut self) -> (Vec<Poly<F::E>>, Vec<TraceEvent>) {
        self.record();
        let one = Poly {
            mons: vec![0u16; self.lay.stride],
            cs: vec![self.f.one()],
            sugar: 0,
        };
        (vec![one], std::mem::take(&mut self.trace))
    }
}

fn lcm_plain(lay: &Layout, a: &[u16], b: &[u16]) -> Vec<u16> {
    let mut out = vec![0u16; lay.stride];
    for v in 0..lay.nvars {
        let s = lay.var_slot(v);
        out[s] = a[s].max(b[s]);
        out[lay.block_deg[lay.block_of[v]]] += out[s];
    }
    out
}
