from sketchbench.html.dom import parse_html, path_candidates, structural_paths


def test_basic_tree_and_paths():
    doc = parse_html("<html><body><div>a</div><div><span>b</span></div></body></html>")
    paths = structural_paths(doc)
    assert "html[0]/body[0]/div[0]" in paths
    assert "html[0]/body[0]/div[1]/span[0]" in paths
    assert paths["html[0]/body[0]/div[0]"].direct_text() == "a"


def test_void_elements_do_not_nest():
    doc = parse_html("<body><img src='a.png'><p>after</p></body>")
    paths = structural_paths(doc)
    assert "body[0]/img[0]" in paths
    assert "body[0]/p[0]" in paths
    assert paths["body[0]/p[0]"].direct_text() == "after"


def test_auto_closing_paragraphs_and_list_items():
    doc = parse_html("<body><p>one<p>two<ul><li>a<li>b</ul></body>")
    paths = structural_paths(doc)
    assert paths["body[0]/p[0]"].direct_text() == "one"
    assert paths["body[0]/p[1]"].direct_text() == "two"
    assert paths["body[0]/ul[0]/li[0]"].direct_text() == "a"
    assert paths["body[0]/ul[0]/li[1]"].direct_text() == "b"


def test_table_sections_are_transparent_for_paths():
    explicit = parse_html("<table><tbody><tr><td>x</td></tr></tbody></table>")
    implicit = parse_html("<table><tr><td>x</td></tr></table>")
    assert set(structural_paths(explicit)) == set(structural_paths(implicit))
    assert "table[0]/tr[0]/td[0]" in structural_paths(explicit)


def test_stray_end_tags_ignored():
    doc = parse_html("<div>a</span></div>")
    assert structural_paths(doc)["div[0]"].direct_text() == "a"


def test_direct_text_excludes_descendants():
    doc = parse_html("<div>a<span>b</span>c</div>")
    el = structural_paths(doc)["div[0]"]
    assert el.direct_text() == "a c"
    assert el.all_text() == "a b c"


def test_attribute_names_lowercased():
    doc = parse_html('<DIV CLASS="Menu"></DIV>')
    el = structural_paths(doc)["div[0]"]
    assert el.attrs == {"class": "Menu"}


def test_path_candidates_bridge_body_wrapper():
    assert "p[0]" in path_candidates("html[0]/body[0]/p[0]")
    assert "html[0]/body[0]/p[0]" in path_candidates("p[0]")
