# -*- coding: utf-8 -*-
#
# mustar-alba documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import sys
import os

import sphinx_gallery
import sphinx_rtd_theme

# If extensions (or modules to document with autodoc) are in another directory,
# add these directories to sys.path here.
sys.path.insert(0, os.path.abspath('..'))

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.doctest',
    'sphinx.ext.intersphinx',
    'sphinx.ext.viewcode',
    'numpydoc',
    'sphinx_gallery.gen_gallery',
]

# this is needed for some reason...
# see https://github.com/numpy/numpydoc/issues/69
numpydoc_show_class_members = False

autodoc_default_options = {'members': True, 'inherited-members': True}

autosummary_generate = True

source_suffix = '.rst'

plot_gallery = True

master_doc = 'index'

project = u'mustar-alba'

from mustaralba import __version__
version = __version__
release = __version__

exclude_patterns = ['_build']

pygments_style = 'sphinx'

# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinx_rtd_theme'

htmlhelp_basename = 'mustar-albadoc'

# -- Options for LaTeX output ---------------------------------------------

latex_elements = {
}

latex_documents = [
  ('index', 'mustar-alba.tex', u'mustar-alba Documentation', u'', 'manual'),
]

man_pages = [
    ('index', 'mustar-alba', u'mustar-alba Documentation', [], 1)
]

intersphinx_mapping = {
    'python': ('https://docs.python.org/{.major}'.format(
        sys.version_info), None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'pandas': ('https://pandas.pydata.org/docs/', None),
    'matplotlib': ('https://matplotlib.org/stable/', None),
}

# sphinx-gallery configuration
sphinx_gallery_conf = {
    'doc_module': 'mustaralba',
    'examples_dirs': '../gallery',
    'gallery_dirs': 'auto_examples',
    'backreferences_dir': os.path.join('generated'),
    'reference_url': {
        'mustaralba': None}
}
