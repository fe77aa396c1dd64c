# agfft source package
