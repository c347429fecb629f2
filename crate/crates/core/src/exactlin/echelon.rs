use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::field::Field;
use super::sparse::SparseVec;

const NO_PIVOT: u32 = u32::MAX;

/// Dense scratch space for sparse row reduction.
///
/// Values outside the touched set are always zero between calls.
pub struct Workspace<E> {
    dense: Vec<E>,
    marked: Vec<bool>,
    heap: BinaryHeap<Reverse<usize>>,
}

impl<E: Clone> Workspace<E> {
    pub fn new(cols: usize, zero: E) -> Self {
        Workspace {
            dense: vec![zero; cols],
            marked: vec![false; cols],
            heap: BinaryHeap::new(),
        }
    }
}

/// Incremental row echelon form with leading-one rows.
///
/// Pivots are leading (smallest) column indices. Rows are only
/// top-reduced on insertion; `into_rref` produces the canonical form.
pub struct Echelon<K: Field> {
    field: K,
    cols: usize,
    pivot_row: Vec<u32>,
    rows: Vec<SparseVec<K::Elem>>,
    ws: Workspace<K::Elem>,
}

impl<K: Field> Echelon<K> {
    pub fn new(field: K, cols: usize) -> Self {
        let ws = Workspace::new(cols, field.zero());
        Echelon {
            field,
            cols,
            pivot_row: vec![NO_PIVOT; cols],
            rows: Vec::new(),
            ws,
        }
    }

    /// Eliminates `rows` in sparsest-first order.
    pub fn from_rows(field: K, cols: usize, mut rows: Vec<SparseVec<K::Elem>>) -> Self {
        rows.sort_by_key(|r| (r.nnz(), r.leading()));
        let mut ech = Echelon::new(field, cols);
        for r in rows {
            ech.insert(r);
        }
        ech
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<K::Elem>] {
        &self.rows
    }

    pub fn has_pivot(&self, col: usize) -> bool {
        self.pivot_row[col] != NO_PIVOT
    }

    pub fn pivot_row(&self, col: usize) -> Option<&SparseVec<K::Elem>> {
        match self.pivot_row[col] {
            NO_PIVOT => None,
            r => Some(&self.rows[r as usize]),
        }
    }

    pub fn total_nnz(&self) -> usize {
        self.rows.iter().map(|r| r.nnz()).sum()
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec<K::Elem>) -> bool {
        let mut ws = std::mem::replace(&mut self.ws, Workspace::new(0, self.field.zero()));
        let reduced = self.reduce_with(&mut ws, &v, false);
        self.ws = ws;
        self.push_reduced(reduced)
    }

    /// Appends a row that is already reduced: leading one in a column with
    /// no pivot yet.
    pub fn push_echelon_row(&mut self, row: SparseVec<K::Elem>) {
        let lead = row.leading().expect("nonzero row");
        debug_assert!(!self.has_pivot(lead));
        debug_assert!(row.entries()[0].1 == self.field.one());
        self.pivot_row[lead] = self.rows.len() as u32;
        self.rows.push(row);
    }

    fn push_reduced(&mut self, reduced: SparseVec<K::Elem>) -> bool {
        let Some(lead) = reduced.leading() else {
            return false;
        };
        let inv = self.field.inv(&reduced.entries()[0].1);
        let row = if inv == self.field.one() {
            reduced
        } else {
            reduced.scale(&self.field, &inv)
        };
        self.pivot_row[lead] = self.rows.len() as u32;
        self.rows.push(row);
        true
    }

    /// Fully reduces `v` against the current rows. The result is zero iff
    /// `v` lies in the row space.
    pub fn reduce(&mut self, v: &SparseVec<K::Elem>) -> SparseVec<K::Elem> {
        let mut ws = std::mem::replace(&mut self.ws, Workspace::new(0, self.field.zero()));
        let out = self.reduce_with(&mut ws, v, true);
        self.ws = ws;
        out
    }

    /// Read-only membership test with a caller-provided workspace.
    pub fn reduce_in(&self, ws: &mut Workspace<K::Elem>, v: &SparseVec<K::Elem>, full: bool) -> SparseVec<K::Elem> {
        self.reduce_with(ws, v, full)
    }

    pub fn new_workspace(&self) -> Workspace<K::Elem> {
        Workspace::new(self.cols, self.field.zero())
    }

    pub fn contains(&mut self, v: &SparseVec<K::Elem>) -> bool {
        let mut ws = std::mem::replace(&mut self.ws, Workspace::new(0, self.field.zero()));
        let out = self.reduce_with(&mut ws, v, false);
        self.ws = ws;
        out.is_zero()
    }

    fn reduce_with(&self, ws: &mut Workspace<K::Elem>, v: &SparseVec<K::Elem>, full: bool) -> SparseVec<K::Elem> {
        let f = &self.field;
        for (i, x) in v.entries() {
            debug_assert!(*i < self.cols);
            ws.dense[*i] = x.clone();
            ws.marked[*i] = true;
            ws.heap.push(Reverse(*i));
        }
        let mut out: Vec<(usize, K::Elem)> = Vec::new();
        while let Some(Reverse(c)) = ws.heap.pop() {
            ws.marked[c] = false;
            let x = std::mem::replace(&mut ws.dense[c], f.zero());
            if f.is_zero(&x) {
                continue;
            }
            let pr = self.pivot_row[c];
            if pr != NO_PIVOT && (full || out.is_empty()) {
                let row = &self.rows[pr as usize];
                for (j, y) in &row.entries()[1..] {
                    ws.dense[*j] = f.mul_sub(&ws.dense[*j], &x, y);
                    if !ws.marked[*j] {
                        ws.marked[*j] = true;
                        ws.heap.push(Reverse(*j));
                    }
                }
            } else {
                out.push((c, x));
            }
        }
        SparseVec::from_sorted_unchecked(out)
    }

    /// Canonical reduced row echelon form: rows sorted by pivot, each pivot
    /// column zero in every other row.
    pub fn into_rref(mut self) -> (Vec<usize>, Vec<SparseVec<K::Elem>>) {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| Reverse(self.rows[r].leading().unwrap()));
        let mut ws = std::mem::replace(&mut self.ws, Workspace::new(0, self.field.zero()));
        for &r in &order {
            let row = &self.rows[r];
            if row.entries()[1..].iter().all(|(c, _)| !self.has_pivot(*c)) {
                continue;
            }
            let lead = row.entries()[0].clone();
            let tail = SparseVec::from_sorted_unchecked(row.entries()[1..].to_vec());
            let reduced = self.reduce_with(&mut ws, &tail, true);
            let mut entries = Vec::with_capacity(reduced.nnz() + 1);
            entries.push(lead);
            entries.extend(reduced.into_entries());
            self.rows[r] = SparseVec::from_sorted_unchecked(entries);
        }
        let mut rows: Vec<(usize, SparseVec<K::Elem>)> =
            self.rows.into_iter().map(|r| (r.leading().unwrap(), r)).collect();
        rows.sort_by_key(|(p, _)| *p);
        rows.into_iter().unzip()
    }
}
