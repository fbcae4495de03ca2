# setup.py
from setuptools import setup, find_packages

setup(
    name="bellcond",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.10",
    install_requires=[
        "numpy>=2.0",
        "pandas>=2.2",
        "click>=8.2",
        "rich>=13.0",
        "jsonschema>=4.20",
    ],
    extras_require={"tests": ["pytest>=8.0"]},
    entry_points={"console_scripts": ["bellcond = bellcond.cli:main"]},
)
