//! Flexible-grid spectrum state: one 360-slice bitmap per directed link,
//! first-fit contiguous assignment with the continuity constraint across all
//! links of a route.

/// Frequency slices per directed link.
pub const SLICES_PER_LINK: usize = 360;
/// Width of one slice in Hz.
pub const SLICE_WIDTH_HZ: f64 = 12.5e9;

/// Occupancy bitmaps for every directed link of a topology.
#[derive(Debug, Clone)]
pub struct SpectrumState {
    grids: Vec<Vec<bool>>,
}

impl SpectrumState {
    /// Fresh all-free state for a topology with `n_links` undirected links.
    pub fn new(n_links: usize) -> Self {
        SpectrumState {
            grids: vec![vec![false; SLICES_PER_LINK]; 2 * n_links],
        }
    }

    pub fn n_directed(&self) -> usize {
        self.grids.len()
    }

    fn run_is_free(&self, directed: usize, start: usize, width: usize) -> bool {
        self.grids[directed][start..start + width].iter().all(|&b| !b)
    }

    /// Lowest start slice of a `width`-slice run free on every listed
    /// directed link, or None if no such run exists.
    pub fn first_fit(&self, route: &[usize], width: usize) -> Option<usize> {
        if width == 0 || width > SLICES_PER_LINK || route.is_empty() {
            return None;
        }
        (0..=SLICES_PER_LINK - width)
            .find(|&start| route.iter().all(|&d| self.run_is_free(d, start, width)))
    }

    /// Mark the run busy on every listed directed link. The run must be free.
    pub fn allocate(&mut self, route: &[usize], start: usize, width: usize) {
        for &d in route {
            assert!(self.run_is_free(d, start, width), "allocating a busy run");
            self.grids[d][start..start + width]
                .iter_mut()
                .for_each(|b| *b = true);
        }
    }

    /// Mark the run free on every listed directed link. The run must be busy.
    pub fn release(&mut self, route: &[usize], start: usize, width: usize) {
        for &d in route {
            assert!(
                self.grids[d][start..start + width].iter().all(|&b| b),
                "releasing a free run"
            );
            self.grids[d][start..start + width]
                .iter_mut()
                .for_each(|b| *b = false);
        }
    }

    /// Busy slices on one directed link.
    pub fn occupied(&self, directed: usize) -> usize {
        self.grids[directed].iter().filter(|&&b| b).count()
    }

    /// Busy slices across all directed links.
    pub fn total_occupied(&self) -> usize {
        (0..self.n_directed()).map(|d| self.occupied(d)).sum()
    }
}
