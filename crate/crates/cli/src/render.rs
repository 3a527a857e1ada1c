use ptk_core::numfmt::fmt_sig;

pub fn point(p: &[f64]) -> String {
    let v: Vec<String> = p.iter().map(|x| fmt_sig(*x)).collect();
    format!("({})", v.join(", "))
}

pub fn sign(s: i32) -> &'static str {
    match s.signum() {
        1 => "+",
        -1 => "-",
        _ => "0",
    }
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Accumulates report lines.
#[derive(Default)]
pub struct Text(String);

impl Text {
    pub fn line(&mut self, s: impl AsRef<str>) -> &mut Self {
        self.0.push_str(s.as_ref());
        self.0.push('\n');
        self
    }

    pub fn kv(&mut self, k: &str, v: impl AsRef<str>) -> &mut Self {
        self.line(format!("{k}: {}", v.as_ref()))
    }

    pub fn section(&mut self, title: &str) -> &mut Self {
        if !self.0.is_empty() {
            self.0.push('\n');
        }
        self.line(format!("## {title}"))
    }

    pub fn finish(self) -> String {
        self.0
    }
}
