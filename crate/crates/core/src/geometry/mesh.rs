use super::Point2;
use crate::error::{Error, Result};

/// Coordinate axis of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }
}

/// Axis-aligned tensor grid over a rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackgroundMesh {
    pub origin: Point2,
    pub width: f64,
    pub height: f64,
    pub nx: usize,
    pub ny: usize,
}

impl BackgroundMesh {
    pub fn new(origin: Point2, width: f64, height: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(origin.is_finite() && width.is_finite() && height.is_finite()) {
            return Err(Error::Domain("mesh extents must be finite".into()));
        }
        if width <= 0.0 || height <= 0.0 {
            return Err(Error::Domain(format!(
                "mesh extents must be positive, got {width} x {height}"
            )));
        }
        if nx == 0 || ny == 0 {
            return Err(Error::Domain("mesh needs at least one cell per axis".into()));
        }
        Ok(BackgroundMesh {
            origin,
            width,
            height,
            nx,
            ny,
        })
    }

    /// Unit square `[0,1]²` split into `n x n` cells.
    pub fn unit_square(n: usize) -> Result<Self> {
        Self::new(Point2::new(0.0, 0.0), 1.0, 1.0, n, n)
    }

    /// Unit square with cell size `h`; `1/h` must be (numerically) an integer.
    pub fn unit_square_with_size(h: f64) -> Result<Self> {
        let n = cells_for_size(1.0, h)?;
        Self::unit_square(n)
    }

    pub fn hx(&self) -> f64 {
        self.width / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        self.height / self.ny as f64
    }

    pub fn n_cells(&self) -> usize {
        self.nx * self.ny
    }

    /// Grid line abscissa `i` (0..=nx).
    pub fn x_line(&self, i: usize) -> f64 {
        if i == self.nx {
            self.origin.x + self.width
        } else {
            self.origin.x + self.width * i as f64 / self.nx as f64
        }
    }

    pub fn y_line(&self, j: usize) -> f64 {
        if j == self.ny {
            self.origin.y + self.height
        } else {
            self.origin.y + self.height * j as f64 / self.ny as f64
        }
    }

    pub fn cell(&self, i: usize, j: usize) -> Cell {
        debug_assert!(i < self.nx && j < self.ny);
        Cell {
            i,
            j,
            x0: self.x_line(i),
            x1: self.x_line(i + 1),
            y0: self.y_line(j),
            y1: self.y_line(j + 1),
        }
    }

    /// Cells in row-major order (x fastest).
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| self.cell(i, j)))
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    /// Geometric tolerance used for chaining and endpoint matching.
    pub fn tol_geo(&self) -> f64 {
        1e-10 * self.width.max(self.height)
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.origin.x
            && p.x <= self.origin.x + self.width
            && p.y >= self.origin.y
            && p.y <= self.origin.y + self.height
    }
}

/// Number of cells of size `h` covering `length`; errors unless `h` divides
/// the length evenly.
pub fn cells_for_size(length: f64, h: f64) -> Result<usize> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Domain(format!("cell size must be positive, got {h}")));
    }
    let n = (length / h).round();
    if n < 1.0 || ((length / h) - n).abs() > 1e-9 * n.max(1.0) {
        return Err(Error::Domain(format!(
            "cell size {h} does not divide the domain length {length}"
        )));
    }
    Ok(n as usize)
}

/// One cell of a background mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub i: usize,
    pub j: usize,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Cell {
    pub fn from_bounds(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Cell {
            i: 0,
            j: 0,
            x0,
            x1,
            y0,
            y1,
        }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> Point2 {
        Point2::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn lo(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.x0,
            Axis::Y => self.y0,
        }
    }

    pub fn hi(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.x1,
            Axis::Y => self.y1,
        }
    }

    pub fn extent(&self, axis: Axis) -> f64 {
        self.hi(axis) - self.lo(axis)
    }

    /// Corners counterclockwise from the lower-left one.
    pub fn corners(&self) -> [Point2; 4] {
        [
            Point2::new(self.x0, self.y0),
            Point2::new(self.x1, self.y0),
            Point2::new(self.x1, self.y1),
            Point2::new(self.x0, self.y1),
        ]
    }

    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        p.x >= self.x0 - tol && p.x <= self.x1 + tol && p.y >= self.y0 - tol && p.y <= self.y1 + tol
    }

    /// Splits the cell into four quadrants.
    pub fn quadrants(&self) -> [Cell; 4] {
        self.split_at(self.center())
    }

    /// The four rectangles obtained by cutting through `c`, which should lie
    /// inside the cell, in the same order as [`Cell::quadrants`].
    pub fn split_at(&self, c: Point2) -> [Cell; 4] {
        let mk = |x0, x1, y0, y1| Cell {
            i: self.i,
            j: self.j,
            x0,
            x1,
            y0,
            y1,
        };
        [
            mk(self.x0, c.x, self.y0, c.y),
            mk(c.x, self.x1, self.y0, c.y),
            mk(self.x0, c.x, c.y, self.y1),
            mk(c.x, self.x1, c.y, self.y1),
        ]
    }
}
