from setuptools import setup, find_packages

setup(
    name="spectracast",
    version="0.1",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={
        "src.spectral.core": ["data/*.csv"],
        "src.spectral.io": ["templates/*.j2"],
        "src.framework.data": ["duckdb/schema/*.sql", "duckdb/queries/*.sql"],
    },
    python_requires='>=3.8',
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.8",
        "pandas",
        "opencv-python>=4.5",
        "duckdb>=0.9.0",
        "click>=8.0.0",
        "pyyaml>=6.0",
        "python-dotenv>=0.19.0",
        "jinja2>=3.1.5",
        "colorama==0.4.6",
    ],
    extras_require={
        "test": ["pytest>=7.0"],
    },
    entry_points={
        'console_scripts': [
            'spectracast=scripts.cli:cli',
        ],
    },
)
