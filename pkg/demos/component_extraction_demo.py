"""Classify the elements of a page and join them with rendered geometry."""

from sketchbench.geometry import Rect
from sketchbench.html import (
    extract_components,
    extract_text_blocks,
    page_topic,
)
from sketchbench.html.dom import parse_html, structural_paths
from sketchbench.html.selectors import classify_element

PAGE_HTML = """
<html>
<head><title>Corner Store</title></head>
<body>
  <nav class="navbar">Home | About</nav>
  <h1>Welcome to the Corner Store</h1>
  <img src="rick.jpg" width="300">
  <div class="menu-bar">not a nav: 'menu-bar' is not the token 'menu'</div>
  <form action="/subscribe"><input type="submit" value="Subscribe"></form>
  <hr>
  <p>We sell everything.</p>
</body>
</html>
"""

print("== element classification ==")
doc = parse_html(PAGE_HTML)
for path, el in structural_paths(doc).items():
    cls = classify_element(el.tag, el.attrs, el.has_direct_text())
    if cls is not None:
        print(f"  {path:40s} -> {cls.value}")

print("\n== page text and topic ==")
print(f"topic: {page_topic(PAGE_HTML)!r}")
print(f"text blocks: {extract_text_blocks(PAGE_HTML).blocks}")

print("\n== joining with geometry ==")
geometry = {
    "html[0]/body[0]/nav[0]": Rect(0, 0, 1280, 60),
    "html[0]/body[0]/h1[0]": Rect(40, 80, 600, 120),
    "html[0]/body[0]/img[0]": Rect(40, 140, 340, 340),
    "html[0]/body[0]/div[0]": Rect(40, 360, 600, 380),
    "html[0]/body[0]/form[0]": Rect(40, 400, 400, 440),
    "html[0]/body[0]/form[0]/input[0]": Rect(40, 400, 160, 440),
    "html[0]/body[0]/hr[0]": Rect(0, 460, 1280, 462),
    "html[0]/body[0]/p[0]": Rect(40, 480, 600, 500),
}
boxes = extract_components(PAGE_HTML, geometry, Rect(0, 0, 1280, 800))
for cls, rects in boxes.boxes_by_class.items():
    if rects:
        print(f"  {cls.value:15s} {len(rects)} box(es)")
