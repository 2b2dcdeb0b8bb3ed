//! Vectors, rotations, rays and the convex occluders used for visibility.
//!
//! Frame convention (vehicle frame): X runs across the cabin width, Y along
//! the cabin length (Y = 0 at the windshield base, growing rearward) and Z
//! up from the floor. A camera with zero roll, pitch and yaw looks along +Y
//! with +Z as its up vector. Orientations compose intrinsically: yaw about
//! Z, then pitch about the camera's lateral axis, then roll about the
//! boresight, i.e. `R = Rz(yaw) * Rx(pitch) * Ry(roll)`. Columns of `R` are
//! the camera's lateral, boresight and up axes expressed in the vehicle
//! frame. Positive pitch raises the boresight toward +Z.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Segment end margin used to ignore the surface a key point sits on.
pub const DEFAULT_EPSILON: f64 = 1e-3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn distance(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    /// Unit vector in the same direction, or `None` for a (near) zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 1e-12 && n.is_finite()).then(|| self * (1.0 / n))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn as_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    fn component(self, axis: usize) -> f64 {
        match axis {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        v.as_array()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Row-major 3x3 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn transpose(&self) -> Mat3 {
        let m = &self.0;
        Mat3([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn mul_vec(&self, v: Vec3) -> Vec3 {
        let m = &self.0;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }

    pub fn mul_mat(&self, o: &Mat3) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        Mat3(out)
    }

    pub fn column(&self, j: usize) -> Vec3 {
        Vec3::new(self.0[0][j], self.0[1][j], self.0[2][j])
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Largest absolute entry of `Mᵀ M - I`.
    pub fn orthonormality_error(&self) -> f64 {
        let p = self.transpose().mul_mat(self);
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((p.0[i][j] - target).abs());
            }
        }
        worst
    }
}

/// Wraps an angle in degrees into `[-180, 180)`.
pub fn normalize_degrees(a: f64) -> f64 {
    let w = (a + 180.0).rem_euclid(360.0) - 180.0;
    // rem_euclid can land exactly on 360 - tiny for negative inputs
    if w >= 180.0 {
        w - 360.0
    } else {
        w + 0.0
    }
}

/// Roll, pitch and yaw in degrees, each wrapped into `[-180, 180)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RotationRPY {
    pub roll: f64,
    pub pitch: f64,
    pub yaw: f64,
}

impl RotationRPY {
    pub fn new(roll: f64, pitch: f64, yaw: f64) -> Self {
        Self {
            roll: normalize_degrees(roll),
            pitch: normalize_degrees(pitch),
            yaw: normalize_degrees(yaw),
        }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn to_matrix(self) -> Mat3 {
        rpy_to_matrix(self)
    }

    /// Angles of a rotation matrix. Pitch is taken in `[-90, 90]`; at
    /// `|pitch| = 90` the roll is folded into the yaw.
    pub fn from_matrix(m: &Mat3) -> Self {
        let m = m.0;
        let pitch = m[2][1].clamp(-1.0, 1.0).asin();
        if pitch.cos() < 1e-12 {
            let yaw = m[1][0].atan2(m[0][0]);
            return Self::new(0.0, pitch.to_degrees(), yaw.to_degrees());
        }
        let yaw = (-m[0][1]).atan2(m[1][1]);
        let roll = (-m[2][0]).atan2(m[2][2]);
        Self::new(roll.to_degrees(), pitch.to_degrees(), yaw.to_degrees())
    }
}

/// Rotation matrix for `r` under the crate convention `Rz(yaw) * Rx(pitch) * Ry(roll)`.
pub fn rpy_to_matrix(r: RotationRPY) -> Mat3 {
    let (sr, cr) = r.roll.to_radians().sin_cos();
    let (sp, cp) = r.pitch.to_radians().sin_cos();
    let (sy, cy) = r.yaw.to_radians().sin_cos();
    // Expanded product of the three elementary rotations.
    Mat3([
        [cy * cr - sy * sp * sr, -sy * cp, cy * sr + sy * sp * cr],
        [sy * cr + cy * sp * sr, cy * cp, sy * sr - cy * sp * cr],
        [-cp * sr, sp, cp * cr],
    ])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ray {
    pub origin: Vec3,
    direction: Vec3,
}

impl Ray {
    /// Builds a ray, normalizing `direction`. Returns `None` for a zero direction.
    pub fn new(origin: Vec3, direction: Vec3) -> Option<Self> {
        Some(Self {
            origin,
            direction: direction.normalized()?,
        })
    }

    pub fn direction(&self) -> Vec3 {
        self.direction
    }

    pub fn at(&self, t: f64) -> Vec3 {
        self.origin + self.direction * t
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrientedBox {
    pub center: Vec3,
    pub half_extents: Vec3,
    pub orientation: RotationRPY,
    // local -> world
    rotation: Mat3,
}

impl OrientedBox {
    /// # Panics
    /// If any half-extent is not strictly positive.
    pub fn new(center: Vec3, half_extents: Vec3, orientation: RotationRPY) -> Self {
        assert!(
            half_extents.x > 0.0 && half_extents.y > 0.0 && half_extents.z > 0.0,
            "box half-extents must be positive, got {half_extents:?}"
        );
        Self {
            center,
            half_extents,
            orientation,
            rotation: orientation.to_matrix(),
        }
    }

    pub fn axis_aligned(center: Vec3, half_extents: Vec3) -> Self {
        Self::new(center, half_extents, RotationRPY::identity())
    }

    /// Axis-aligned box spanning two opposite corners.
    pub fn from_corners(a: Vec3, b: Vec3) -> Self {
        let center = (a + b) * 0.5;
        let h = Vec3::new(
            (a.x - b.x).abs() * 0.5,
            (a.y - b.y).abs() * 0.5,
            (a.z - b.z).abs() * 0.5,
        );
        Self::axis_aligned(center, h)
    }

    pub fn to_local(&self, p: Vec3) -> Vec3 {
        self.rotation.transpose().mul_vec(p - self.center)
    }

    pub fn corners(&self) -> [Vec3; 8] {
        let h = self.half_extents;
        let mut out = [Vec3::ZERO; 8];
        for (i, c) in out.iter_mut().enumerate() {
            let sx = if i & 1 == 0 { -1.0 } else { 1.0 };
            let sy = if i & 2 == 0 { -1.0 } else { 1.0 };
            let sz = if i & 4 == 0 { -1.0 } else { 1.0 };
            *c = self.center
                + self
                    .rotation
                    .mul_vec(Vec3::new(sx * h.x, sy * h.y, sz * h.z));
        }
        out
    }

    pub fn contains(&self, p: Vec3, tol: f64) -> bool {
        let l = self.to_local(p);
        let h = self.half_extents;
        l.x.abs() <= h.x + tol && l.y.abs() <= h.y + tol && l.z.abs() <= h.z + tol
    }

    /// Distance from `p` to the box surface (zero on the surface).
    pub fn surface_distance(&self, p: Vec3) -> f64 {
        let l = self.to_local(p);
        let h = self.half_extents;
        let d = Vec3::new(l.x.abs() - h.x, l.y.abs() - h.y, l.z.abs() - h.z);
        let outside = Vec3::new(d.x.max(0.0), d.y.max(0.0), d.z.max(0.0)).norm();
        let inside = d.x.max(d.y).max(d.z).min(0.0);
        outside + inside.abs()
    }

    /// Parametric interval `[t_enter, t_exit]` of the ray's supporting line inside the box.
    pub fn line_interval(&self, ray: &Ray) -> Option<(f64, f64)> {
        let rt = self.rotation.transpose();
        let o = rt.mul_vec(ray.origin - self.center);
        let d = rt.mul_vec(ray.direction);
        let h = self.half_extents;
        let mut t0 = f64::NEG_INFINITY;
        let mut t1 = f64::INFINITY;
        for axis in 0..3 {
            let (oa, da, ha) = (o.component(axis), d.component(axis), h.component(axis));
            if da.abs() < 1e-15 {
                if oa.abs() > ha {
                    return None;
                }
                continue;
            }
            let inv = 1.0 / da;
            let (mut near, mut far) = ((-ha - oa) * inv, (ha - oa) * inv);
            if near > far {
                std::mem::swap(&mut near, &mut far);
            }
            t0 = t0.max(near);
            t1 = t1.min(far);
            if t0 > t1 {
                return None;
            }
        }
        Some((t0, t1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sphere {
    pub center: Vec3,
    pub radius: f64,
}

impl Sphere {
    /// # Panics
    /// If `radius` is not strictly positive.
    pub fn new(center: Vec3, radius: f64) -> Self {
        assert!(radius > 0.0, "sphere radius must be positive, got {radius}");
        Self { center, radius }
    }

    pub fn line_interval(&self, ray: &Ray) -> Option<(f64, f64)> {
        // |o + t d - c|^2 = r^2 with |d| = 1
        let oc = ray.origin - self.center;
        let b = oc.dot(ray.direction);
        let c = oc.norm_squared() - self.radius * self.radius;
        let disc = b * b - c;
        if disc < 0.0 {
            return None;
        }
        let s = disc.sqrt();
        Some((-b - s, -b + s))
    }
}

/// A convex occluding primitive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Occluder {
    Box(OrientedBox),
    Sphere(Sphere),
}

impl Occluder {
    pub fn line_interval(&self, ray: &Ray) -> Option<(f64, f64)> {
        match self {
            Occluder::Box(b) => b.line_interval(ray),
            Occluder::Sphere(s) => s.line_interval(ray),
        }
    }
}

impl From<OrientedBox> for Occluder {
    fn from(b: OrientedBox) -> Self {
        Occluder::Box(b)
    }
}

impl From<Sphere> for Occluder {
    fn from(s: Sphere) -> Self {
        Occluder::Sphere(s)
    }
}

fn first_nonnegative((t0, t1): (f64, f64)) -> Option<f64> {
    if t0 >= 0.0 {
        Some(t0)
    } else if t1 >= 0.0 {
        Some(t1)
    } else {
        None
    }
}

/// Smallest `t >= 0` where the ray meets the box surface. A ray starting
/// inside the box reports its exit distance.
pub fn ray_hits_box(ray: &Ray, b: &OrientedBox) -> Option<f64> {
    b.line_interval(ray).and_then(first_nonnegative)
}

/// Smallest nonnegative root of the ray/sphere quadratic.
pub fn ray_hits_sphere(ray: &Ray, s: &Sphere) -> Option<f64> {
    s.line_interval(ray).and_then(first_nonnegative)
}

/// True iff some occluder overlaps the open segment `p0 -> p1` with both
/// ends trimmed by `epsilon`.
pub fn segment_occluded(p0: Vec3, p1: Vec3, occluders: &[Occluder], epsilon: f64) -> bool {
    let Some(ray) = Ray::new(p0, p1 - p0) else {
        return false;
    };
    let len = p0.distance(p1);
    let (lo, hi) = (epsilon, len - epsilon);
    if lo >= hi {
        return false;
    }
    occluders.iter().any(|occ| match occ.line_interval(&ray) {
        Some((t0, t1)) => t0 < hi && t1 > lo,
        None => false,
    })
}
