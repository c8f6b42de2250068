/// Maps a surface identifier to a C++ identifier.
///
/// Letters and digits pass through, `_` becomes `_u` and `'` becomes
/// `_prime`, and the result is prefixed with `ju_`. Every `_` after the
/// prefix starts an escape, so distinct inputs give distinct outputs and no
/// output is a C++ keyword.
pub fn mangle(name: &str) -> String {
    format!("ju_{}", escape(name))
}

/// Template parameter name for a type variable.
pub fn mangle_type_var(name: &str) -> String {
    format!("t_{}", escape(name))
}

fn escape(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for c in name.chars() {
        match c {
            '_' => out.push_str("_u"),
            '\'' => out.push_str("_prime"),
            c if c.is_ascii_alphanumeric() => out.push(c),
            c => {
                out.push_str(&format!("_x{:x}_", c as u32));
            }
        }
    }
    out
}
