//! Scoped-thread executor. Work is cut into contiguous chunks and results
//! are stitched back in index order, so output never depends on the thread
//! count.

use bis_core::Executor;

#[derive(Debug, Clone, Copy)]
pub struct Threads {
    threads: usize,
}

impl Threads {
    pub fn new(threads: usize) -> Self {
        Self { threads: threads.max(1) }
    }
}

impl Executor for Threads {
    fn map_range<T: Send, F: Fn(usize) -> T + Sync>(&self, len: usize, f: F) -> Vec<T> {
        if self.threads == 1 || len < 2 {
            return (0..len).map(f).collect();
        }
        let chunk = len.div_ceil(self.threads);
        let f = &f;
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..len)
                .step_by(chunk)
                .map(|start| s.spawn(move || (start..(start + chunk).min(len)).map(f).collect::<Vec<T>>()))
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
        })
    }
}
