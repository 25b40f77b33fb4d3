use std::io::{BufReader, Cursor, Write};
use std::path::Path;

use crate::geometry::{point_segment_distance, Point};

use super::decorate::DecoratedPolyline;
use super::{RenderConfig, RenderError};

/// 8-bit grayscale image, row-major, white background and black ink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<u8>,
}

impl Image {
    pub fn blank(width: u32, height: u32) -> Self {
        Image {
            width,
            height,
            pixels: vec![255; width as usize * height as usize],
        }
    }

    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    pub fn ink_pixels(&self) -> usize {
        self.pixels.iter().filter(|&&v| v < 255).count()
    }

    pub fn encode_png(&self) -> Result<Vec<u8>, RenderError> {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, self.width, self.height);
            enc.set_color(png::ColorType::Grayscale);
            enc.set_depth(png::BitDepth::Eight);
            let mut w = enc.write_header().map_err(|e| RenderError::Png(e.to_string()))?;
            w.write_image_data(&self.pixels).map_err(|e| RenderError::Png(e.to_string()))?;
        }
        Ok(out)
    }

    pub fn decode_png(bytes: &[u8]) -> Result<Self, RenderError> {
        decode(Cursor::new(bytes))
    }

    pub fn write_png(&self, path: &Path) -> Result<(), RenderError> {
        let bytes = self.encode_png()?;
        let mut f = std::fs::File::create(path).map_err(|e| RenderError::Io(format!("{}: {e}", path.display())))?;
        f.write_all(&bytes).map_err(|e| RenderError::Io(format!("{}: {e}", path.display())))
    }

    pub fn read_png(path: &Path) -> Result<Self, RenderError> {
        let f = std::fs::File::open(path).map_err(|e| RenderError::Io(format!("{}: {e}", path.display())))?;
        decode(BufReader::new(f))
    }
}

fn decode<R: std::io::BufRead + std::io::Seek>(r: R) -> Result<Image, RenderError> {
    let err = |e: png::DecodingError| RenderError::Png(e.to_string());
    let mut dec = png::Decoder::new(r);
    dec.set_transformations(png::Transformations::EXPAND | png::Transformations::STRIP_16);
    let mut reader = dec.read_info().map_err(err)?;
    let size = reader.output_buffer_size().ok_or_else(|| RenderError::Png("image too large".into()))?;
    let mut buf = vec![0; size];
    let info = reader.next_frame(&mut buf).map_err(err)?;
    let (w, h) = (info.width, info.height);
    let channels = info.color_type.samples();
    let row = info.line_size;
    let mut pixels = Vec::with_capacity(w as usize * h as usize);
    for y in 0..h as usize {
        for x in 0..w as usize {
            let px = &buf[y * row + x * channels..][..channels];
            let v = if channels >= 3 {
                ((px[0] as u32 + px[1] as u32 + px[2] as u32) / 3) as u8
            } else {
                px[0]
            };
            pixels.push(v);
        }
    }
    Ok(Image { width: w, height: h, pixels })
}

/// Longest piece a polyline edge is split into before pixel scanning.
const MAX_PIECE: f64 = 8.0;

/// Draw polylines with a round-capped pen.
///
/// Canvas coordinates have y pointing up; pixel `(px, py)` covers
/// `[px, px+1) x [py, py+1)` after flipping y. Each pixel is covered by a
/// `supersample x supersample` grid and its value is the fraction of
/// uncovered subsamples.
pub fn rasterize(d: &DecoratedPolyline, cfg: &RenderConfig) -> Image {
    let (w, h) = (cfg.canvas_width as usize, cfg.canvas_height as usize);
    let ss = cfg.supersample as usize;
    let r = 0.5 * cfg.stroke_width;
    let reach = r + std::f64::consts::FRAC_1_SQRT_2;
    let mut masks = vec![0u16; w * h];
    let flip = |p: &Point| Point::new(p.x, h as f64 - p.y);
    let subs: Vec<f64> = (0..ss).map(|i| (i as f64 + 0.5) / ss as f64).collect();
    for line in d.polylines() {
        let pts: Vec<Point> = line.iter().map(flip).collect();
        let edges: Vec<(Point, Point)> = if pts.len() == 1 {
            vec![(pts[0], pts[0])]
        } else {
            pts.windows(2).map(|w| (w[0], w[1])).collect()
        };
        for (a, b) in edges {
            let pieces = (a.dist(b) / MAX_PIECE).ceil().max(1.0) as usize;
            for k in 0..pieces {
                let p0 = a.lerp(b, k as f64 / pieces as f64);
                let p1 = a.lerp(b, (k + 1) as f64 / pieces as f64);
                let x0 = ((p0.x.min(p1.x) - r).floor().max(0.0)) as usize;
                let y0 = ((p0.y.min(p1.y) - r).floor().max(0.0)) as usize;
                let x1 = ((p0.x.max(p1.x) + r).ceil().min(w as f64)) as usize;
                let y1 = ((p0.y.max(p1.y) + r).ceil().min(h as f64)) as usize;
                for py in y0..y1 {
                    for px in x0..x1 {
                        let centre = Point::new(px as f64 + 0.5, py as f64 + 0.5);
                        if point_segment_distance(centre, p0, p1) > reach {
                            continue;
                        }
                        let m = &mut masks[py * w + px];
                        for (j, sy) in subs.iter().enumerate() {
                            for (i, sx) in subs.iter().enumerate() {
                                let bit = 1u16 << (j * ss + i);
                                if *m & bit == 0 {
                                    let q = Point::new(px as f64 + sx, py as f64 + sy);
                                    if point_segment_distance(q, p0, p1) <= r {
                                        *m |= bit;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let n = (ss * ss) as u32;
    let pixels = masks
        .iter()
        .map(|m| (255 - (m.count_ones() * 255 + n / 2) / n) as u8)
        .collect();
    Image {
        width: cfg.canvas_width,
        height: cfg.canvas_height,
        pixels,
    }
}
