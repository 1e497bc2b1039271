from setuptools import setup

setup(
    name='reg2owl',
    packages=['commands', 'core'],
    py_modules=['app'],
    package_data={'core': ['config.ini', 'vocabularies/*.tsv']},
    install_requires=['marshmallow', 'pyparsing >= 3.0'],
    entry_points={'console_scripts': ['reg2owl=app:main']})
