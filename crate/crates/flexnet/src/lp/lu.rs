//! Sparse LU factorization of simplex basis matrices.
//!
//! Right-looking elimination with Markowitz pivoting. Singleton columns and
//! rows are eliminated first (they cause no fill), which makes factorization
//! near-linear for the network-structured bases this solver sees; the general
//! Markowitz path with threshold pivoting handles everything else.

/// One eliminated column of L: multipliers applied to the remaining rows.
struct LCol {
    /// (original row index, multiplier) pairs.
    entries: Vec<(u32, f64)>,
}

/// One pivot row of U, stored at elimination time.
struct URow {
    diag: f64,
    /// (original column index, value) for columns eliminated later.
    entries: Vec<(u32, f64)>,
}

/// LU factors of a square sparse matrix, with row/column pivot order.
pub struct SparseLu {
    m: usize,
    /// Pivot row per elimination step (original index).
    pivot_row: Vec<u32>,
    /// Pivot column per elimination step (original index).
    pivot_col: Vec<u32>,
    /// Step at which each original column was eliminated.
    col_step: Vec<u32>,
    lcols: Vec<LCol>,
    urows: Vec<URow>,
    /// Rows that never received a pivot (structurally singular input).
    pub deficient_rows: Vec<u32>,
    /// Columns that never received a pivot.
    pub deficient_cols: Vec<u32>,
}

/// Relative pivot magnitude threshold (vs. the largest entry in the column).
const PIVOT_REL_TOL: f64 = 0.01;
/// Entries below this magnitude are dropped during elimination.
const DROP_TOL: f64 = 1e-13;

impl SparseLu {
    /// Factorizes the m x m matrix given as columns of (row, value) pairs.
    ///
    /// Singular inputs do not fail: the unpivoted rows/columns are reported in
    /// `deficient_rows` / `deficient_cols` and the caller decides how to repair.
    pub fn factorize(m: usize, cols: &[Vec<(u32, f64)>]) -> SparseLu {
        assert_eq!(cols.len(), m);

        // Working row-major structure.
        let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); m];
        for (j, col) in cols.iter().enumerate() {
            for &(i, v) in col {
                if v != 0.0 {
                    rows[i as usize].push((j as u32, v));
                }
            }
        }
        // Structural column membership (may go stale; verified on use).
        let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); m];
        for (i, r) in rows.iter().enumerate() {
            for &(j, _) in r {
                col_rows[j as usize].push(i as u32);
            }
        }

        let mut row_active = vec![true; m];
        let mut col_active = vec![true; m];
        let mut row_count: Vec<u32> = rows.iter().map(|r| r.len() as u32).collect();
        let mut col_count: Vec<u32> = col_rows.iter().map(|c| c.len() as u32).collect();

        let mut lu = SparseLu {
            m,
            pivot_row: Vec::with_capacity(m),
            pivot_col: Vec::with_capacity(m),
            col_step: vec![u32::MAX; m],
            lcols: Vec::with_capacity(m),
            urows: Vec::with_capacity(m),
            deficient_rows: Vec::new(),
            deficient_cols: Vec::new(),
        };

        // Queues of candidate singletons; entries may be stale.
        let mut col_single: Vec<u32> = (0..m as u32).filter(|&j| col_count[j as usize] == 1).collect();
        let mut row_single: Vec<u32> = (0..m as u32).filter(|&i| row_count[i as usize] == 1).collect();

        let mut scratch: Vec<f64> = vec![0.0; m];
        let mut scratch_used: Vec<u32> = Vec::new();

        for _step in 0..m {
            let mut pivot: Option<(u32, u32)> = None; // (row, col)

            // 1. Singleton columns: no multipliers, no fill.
            while let Some(j) = col_single.pop() {
                let j = j as usize;
                if !col_active[j] {
                    continue;
                }
                col_rows[j].retain(|&i| row_active[i as usize] && row_has(&rows[i as usize], j as u32));
                col_count[j] = col_rows[j].len() as u32;
                if col_count[j] == 1 {
                    let i = col_rows[j][0];
                    let v = row_get(&rows[i as usize], j as u32);
                    if v.abs() > DROP_TOL {
                        pivot = Some((i, j as u32));
                        break;
                    }
                } else if col_count[j] == 0 {
                    continue;
                }
            }

            // 2. Singleton rows: one merge per dependent row, still no fill in U.
            if pivot.is_none() {
                while let Some(i) = row_single.pop() {
                    let i = i as usize;
                    if !row_active[i] || rows[i].len() != 1 {
                        continue;
                    }
                    let (j, v) = rows[i][0];
                    // Stability: the pivot must not be dwarfed by its column.
                    let cmax = col_max(&col_rows[j as usize], &rows, &row_active, j);
                    if v.abs() >= PIVOT_REL_TOL * cmax && v.abs() > DROP_TOL {
                        pivot = Some((i as u32, j));
                        break;
                    }
                }
            }

            // 3. Markowitz: minimize (row_count-1)*(col_count-1) over the
            //    sparsest few columns (one verification pass, bounded scan).
            if pivot.is_none() {
                const SCAN: usize = 8;
                let mut cand: Vec<(u32, u32)> = Vec::with_capacity(SCAN + 1); // (count, col)
                for j in 0..m {
                    if !col_active[j] {
                        continue;
                    }
                    col_rows[j].retain(|&i| {
                        row_active[i as usize] && row_has(&rows[i as usize], j as u32)
                    });
                    col_count[j] = col_rows[j].len() as u32;
                    if col_count[j] == 0 {
                        continue;
                    }
                    let entry = (col_count[j], j as u32);
                    let pos = cand.partition_point(|&c| c < entry);
                    if pos < SCAN {
                        cand.insert(pos, entry);
                        cand.truncate(SCAN);
                    }
                }
                let mut best: Option<(u64, u32, u32)> = None; // (cost, row, col)
                for &(cnt, j) in &cand {
                    let cmax = col_max(&col_rows[j as usize], &rows, &row_active, j);
                    for &i in &col_rows[j as usize] {
                        let v = row_get(&rows[i as usize], j);
                        if v.abs() < PIVOT_REL_TOL * cmax || v.abs() <= DROP_TOL {
                            continue;
                        }
                        let cost = (row_count[i as usize] as u64 - 1) * (cnt as u64 - 1);
                        if best.map_or(true, |(c, _, _)| cost < c) {
                            best = Some((cost, i, j));
                        }
                    }
                }
                pivot = best.map(|(_, i, j)| (i, j));
            }

            let (pr, pc) = match pivot {
                Some(p) => p,
                None => break, // remaining submatrix is numerically zero
            };

            let piv_val = row_get(&rows[pr as usize], pc);
            debug_assert!(piv_val != 0.0);

            // Record the U row and deactivate the pivot row.
            let mut u_entries: Vec<(u32, f64)> = rows[pr as usize]
                .iter()
                .filter(|&&(j, _)| j != pc && col_active[j as usize])
                .map(|&(j, v)| (j, v))
                .collect();
            u_entries.shrink_to_fit();
            lu.urows.push(URow {
                diag: piv_val,
                entries: u_entries,
            });
            lu.pivot_row.push(pr);
            lu.pivot_col.push(pc);
            lu.col_step[pc as usize] = (lu.pivot_row.len() - 1) as u32;

            row_active[pr as usize] = false;
            col_active[pc as usize] = false;

            // Eliminate the pivot column from the remaining rows.
            let mut l_entries: Vec<(u32, f64)> = Vec::new();
            col_rows[pc as usize].retain(|&i| row_active[i as usize]);
            let dependents: Vec<u32> = col_rows[pc as usize]
                .iter()
                .copied()
                .filter(|&i| row_has(&rows[i as usize], pc))
                .collect();
            if !dependents.is_empty() {
                // Load the pivot row into scratch once.
                for &(j, v) in &rows[pr as usize] {
                    if col_active[j as usize] {
                        scratch[j as usize] = v;
                        scratch_used.push(j);
                    }
                }
                for &i in &dependents {
                    let iu = i as usize;
                    let mult = row_get(&rows[iu], pc) / piv_val;
                    l_entries.push((i, mult));
                    // rows[i] -= mult * pivot_row, skipping the pivot column.
                    let old = std::mem::take(&mut rows[iu]);
                    let mut new_row: Vec<(u32, f64)> = Vec::with_capacity(old.len() + scratch_used.len());
                    let mut touched: Vec<u32> = Vec::with_capacity(scratch_used.len());
                    for (j, v) in old {
                        if j == pc || !col_active[j as usize] {
                            continue;
                        }
                        let s = scratch[j as usize];
                        if s != 0.0 {
                            let nv = v - mult * s;
                            touched.push(j);
                            scratch[j as usize] = f64::NAN; // mark consumed
                            if nv.abs() > DROP_TOL {
                                new_row.push((j, nv));
                            }
                        } else {
                            new_row.push((j, v));
                        }
                    }
                    // Fill-in: pivot-row columns absent from row i.
                    for &j in &scratch_used {
                        let s = scratch[j as usize];
                        if s.is_nan() {
                            continue;
                        }
                        let nv = -mult * s;
                        if nv.abs() > DROP_TOL {
                            new_row.push((j, nv));
                            col_rows[j as usize].push(i);
                            col_count[j as usize] += 1;
                        }
                    }
                    // Restore consumed scratch marks.
                    for &j in &touched {
                        scratch[j as usize] = row_get(&rows[pr as usize], j);
                    }
                    let new_len = new_row.len() as u32;
                    rows[iu] = new_row;
                    row_count[iu] = new_len;
                    if new_len == 1 {
                        row_single.push(i);
                    }
                }
                for &j in &scratch_used {
                    scratch[j as usize] = 0.0;
                }
                scratch_used.clear();
            }
            lu.lcols.push(LCol { entries: l_entries });

            // Column counts shrink for every column in the retired pivot row.
            for &(j, _) in &rows[pr as usize] {
                let ju = j as usize;
                if col_active[ju] && col_count[ju] > 0 {
                    col_count[ju] -= 1;
                    if col_count[ju] == 1 {
                        col_single.push(j);
                    }
                }
            }
            rows[pr as usize] = Vec::new();
        }

        for i in 0..m {
            if row_active[i] {
                lu.deficient_rows.push(i as u32);
            }
        }
        for j in 0..m {
            if col_active[j] {
                lu.deficient_cols.push(j as u32);
            }
        }
        lu
    }

    pub fn is_singular(&self) -> bool {
        !self.deficient_rows.is_empty()
    }

    /// Number of stored nonzeros in L and U.
    pub fn fill(&self) -> usize {
        self.lcols.iter().map(|c| c.entries.len()).sum::<usize>()
            + self.urows.iter().map(|r| r.entries.len() + 1).sum::<usize>()
    }

    /// Solves `B x = b` in place; `x` enters holding `b` (dense, length m).
    pub fn ftran(&self, x: &mut [f64]) {
        debug_assert_eq!(x.len(), self.m);
        let steps = self.pivot_row.len();
        // Forward: apply L inverse in original row indices.
        for t in 0..steps {
            let xr = x[self.pivot_row[t] as usize];
            if xr != 0.0 {
                for &(i, mult) in &self.lcols[t].entries {
                    x[i as usize] -= mult * xr;
                }
            }
        }
        // Backward: solve U in step coordinates, scatter to column indices.
        let mut xs = vec![0.0; steps];
        for t in (0..steps).rev() {
            let mut s = x[self.pivot_row[t] as usize];
            for &(c, v) in &self.urows[t].entries {
                let t2 = self.col_step[c as usize];
                debug_assert!(t2 != u32::MAX && t2 as usize > t);
                s -= v * xs[t2 as usize];
            }
            xs[t] = s / self.urows[t].diag;
        }
        for v in x.iter_mut() {
            *v = 0.0;
        }
        for t in 0..steps {
            x[self.pivot_col[t] as usize] = xs[t];
        }
    }

    /// Solves `B^T y = c` in place; `y` enters holding `c` (dense, length m).
    pub fn btran(&self, y: &mut [f64]) {
        debug_assert_eq!(y.len(), self.m);
        let steps = self.pivot_row.len();
        // Solve U^T z = c_step (forward, using rows of U).
        let mut z = vec![0.0; steps];
        for t in 0..steps {
            z[t] = y[self.pivot_col[t] as usize];
        }
        for t in 0..steps {
            z[t] /= self.urows[t].diag;
            let zt = z[t];
            if zt != 0.0 {
                for &(c, v) in &self.urows[t].entries {
                    z[self.col_step[c as usize] as usize] -= v * zt;
                }
            }
        }
        // Solve L^T w = z backward; w indexed by original rows.
        for v in y.iter_mut() {
            *v = 0.0;
        }
        for t in (0..steps).rev() {
            let mut s = z[t];
            for &(i, mult) in &self.lcols[t].entries {
                s -= mult * y[i as usize];
            }
            y[self.pivot_row[t] as usize] = s;
        }
    }
}

#[inline]
fn row_has(row: &[(u32, f64)], col: u32) -> bool {
    row.iter().any(|&(j, _)| j == col)
}

#[inline]
fn row_get(row: &[(u32, f64)], col: u32) -> f64 {
    row.iter()
        .find(|&&(j, _)| j == col)
        .map(|&(_, v)| v)
        .unwrap_or(0.0)
}

fn col_max(members: &[u32], rows: &[Vec<(u32, f64)>], row_active: &[bool], col: u32) -> f64 {
    let mut best = 0.0f64;
    for &i in members {
        if row_active[i as usize] {
            best = best.max(row_get(&rows[i as usize], col).abs());
        }
    }
    best
}
