# Configuration file for the Sphinx documentation builder.
#
# https://www.sphinx-doc.org/en/master/usage/configuration.html

project = 'endslab'
copyright = '2026, endslab contributors'
author = 'endslab contributors'

extensions = [
    'sphinx.ext.autodoc',
    'sphinxcontrib.autodoc_pydantic',
]

templates_path = ['_templates']
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

language = 'en'

autodoc_pydantic_model_show_json = True

html_theme = 'alabaster'
