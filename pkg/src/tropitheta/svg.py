"""Plain SVG emission for cell decompositions and image polygons.

Figures are for humans; the JSON files are the contract.  Coordinates go
through one fixed affine rational-to-pixel map that is recorded in a
comment at the top of the file, so identical inputs give byte-identical
output."""

from fractions import Fraction

SCALE = 24          # pixels per coordinate unit
MARGIN = 30


def _bounds(figures):
    pts = [p for fig in figures for p in fig["points"]]
    if not pts:
        return (Fraction(0), Fraction(1), Fraction(0), Fraction(1))
    xs = [Fraction(p[0]) for p in pts]
    ys = [Fraction(p[1]) for p in pts]
    return min(xs), max(xs), min(ys), max(ys)


def _fmt(q):
    # exact pixel coordinates; SVG accepts decimals, so print a fraction
    # resolved to a fixed denominator grid (1/100 px)
    return "%d.%02d" % divmod(round(Fraction(q) * 100), 100)


def render(figures, title=""):
    """Render a list of figures into an SVG document.

    Each figure is a dict with "points" (rational 2d tuples), "kind"
    ("polygon", "polyline" or "points") and optional "color"."""
    x0, x1, y0, y1 = _bounds(figures)
    width = int((x1 - x0) * SCALE) + 2 * MARGIN
    height = int((y1 - y0) * SCALE) + 2 * MARGIN

    def pix(p):
        # y flips: SVG grows downward
        px = MARGIN + (Fraction(p[0]) - x0) * SCALE
        py = MARGIN + (y1 - Fraction(p[1])) * SCALE
        return px, py

    out = ['<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d">'
           % (width, height)]
    out.append("<!-- scale: %d px per unit; origin at (%s, %s);"
               " y axis flipped -->" % (SCALE, x0, y1))
    if title:
        out.append('<title>%s</title>' % title)
    for fig in figures:
        color = fig.get("color", "#1f3b73")
        pts = [pix(p) for p in fig["points"]]
        if fig.get("kind", "polygon") == "points":
            for px, py in pts:
                out.append('<circle cx="%s" cy="%s" r="3" fill="%s"/>'
                           % (_fmt(px), _fmt(py), color))
            continue
        closed = fig.get("kind", "polygon") == "polygon"
        coords = " ".join("%s,%s" % (_fmt(px), _fmt(py)) for px, py in pts)
        tag = "polygon" if closed else "polyline"
        out.append('<%s points="%s" fill="none" stroke="%s" '
                   'stroke-width="2"/>' % (tag, coords, color))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def plane_points(vertices):
    """Project vertices of any dimension to the drawing plane: 1d gets a
    zero second coordinate, higher dimensions keep the first two."""
    out = []
    for v in vertices:
        v = tuple(v)
        if len(v) == 1:
            out.append((v[0], Fraction(0)))
        else:
            out.append((v[0], v[1]))
    return out
