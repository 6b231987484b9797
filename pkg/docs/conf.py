# Sphinx configuration for the Derivlex documentation.
#
# https://www.sphinx-doc.org/en/master/usage/configuration.html

import os
import re
import sys

try:
    import derivlex  # noqa: F401
except ImportError:
    sys.path.insert(0, os.path.abspath(".."))

HERE = os.path.dirname(os.path.abspath(__file__))
VERSION_FILE = os.path.join(HERE, os.pardir, "derivlex", "_version.py")


def get_version(filename=VERSION_FILE, strip_extra=False):
    import packaging.version

    with open(filename) as fd:
        mobj = re.search(
            r"""^__version__\s*=\s*(?P<quote>['"])(?P<version>.*)(?P=quote)""",
            fd.read(),
            re.MULTILINE,
        )
    version = packaging.version.parse(mobj.group("version"))
    return version.base_version if strip_extra else str(version)


# -- Project information -----------------------------------------------------

project = "Derivlex"
copyright = "2025, Antonio Valentino"
author = "Antonio Valentino"
version = get_version(strip_extra=True)
release = get_version()


# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.doctest",
    "sphinx.ext.intersphinx",
    "sphinx.ext.viewcode",
    "sphinx.ext.extlinks",
]

templates_path = ["_templates"]
master_doc = "index"
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]

# lexer specifications in the docs use the ".vl" surface syntax
highlight_language = "none"

autodoc_member_order = "bysource"
autodoc_typehints = "description"
autodoc_default_options = {
    "members": True,
    "show-inheritance": True,
}
doctest_global_setup = """
from derivlex import compile_spec, tokenize_all
"""


# -- Options for HTML output -------------------------------------------------

html_theme = "alabaster"
html_theme_options = {
    "github_user": "avalentino",
    "github_repo": "derivlex",
    "github_banner": True,
    "github_button": True,
    "extra_nav_links": {
        "Derivlex on PyPI": "https://pypi.org/project/derivlex",
        "Brzozowski derivatives": (
            "https://en.wikipedia.org/wiki/Brzozowski_derivative"
        ),
    },
}
html_static_path = ["_static"]
html_sidebars = {
    "**": [
        "about.html",
        "navigation.html",
        "relations.html",
        "searchbox.html",
    ],
}


# -- Options for LaTeX output ------------------------------------------------

latex_elements = {
    "papersize": "a4paper",
    "pointsize": "11pt",
}
latex_documents = [
    (master_doc, "Derivlex.tex", "Derivlex Documentation", author, "manual"),
]
latex_domain_indices = False


# -- Extension configuration -------------------------------------------------

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable", None),
    "hypothesis": ("https://hypothesis.readthedocs.io/en/latest", None),
}

extlinks = {
    "issue": ("https://github.com/avalentino/derivlex/issues/%s", "gh-%s"),
}
