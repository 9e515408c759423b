# Configuration file for the Sphinx documentation builder.
#
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Path setup --------------------------------------------------------------

import os
import sys
sys.path.insert(0, os.path.abspath('..'))

# -- Project information -----------------------------------------------------

project = 'specklelib'
copyright = '2024, specklelib developers'
author = 'specklelib developers'
release = '0.3.0'

try:
    # Read the version from the .toml file
    import tomllib
    with open('../pyproject.toml', 'rb') as f:
        pyproject = tomllib.load(f)
        project = pyproject['tool']['poetry']['name']
        release = pyproject['tool']['poetry']['version']
except (OSError, KeyError):
    pass


# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.todo',
    'sphinx.ext.viewcode',
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'myst_parser'
]

myst_all_links_external = True

templates_path = ['_templates']

source_suffix = '.rst'

exclude_patterns = ['doc_build', 'Thumbs.db', '.DS_Store']


# -- Options for HTML output -------------------------------------------------

html_theme = 'agogo'
html_theme_options = {'rightsidebar': False}
