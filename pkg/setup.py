from setuptools import setup, find_packages

setup(
    name="entlifepy",
    version="0.1",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    install_requires=[
        "numpy",
        "scipy",
        "networkx",
        "python-dotenv"
    ],
    extras_require={
        "test": [
            "pytest",
            "hypothesis",
            "sympy"
        ],
    },
    entry_points={
        "console_scripts": [
            "entlifepy=entlifepy.cli:main",
        ],
    },
)
