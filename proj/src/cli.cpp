#include "stegkit/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <optional>
#include <ostream>

#include "CLI11.hpp"

#include "stegkit/audio.hpp"
#include "stegkit/audiosteg.hpp"
#include "stegkit/error.hpp"
#include "stegkit/filesteg.hpp"
#include "stegkit/graphsteg.hpp"
#include "stegkit/image.hpp"
#include "stegkit/imagesteg.hpp"
#include "stegkit/netsteg.hpp"
#include "stegkit/steganalysis.hpp"

namespace stegkit {

namespace {

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, ByteView data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot create " + path);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

void write_text(const std::string& path, const std::string& text) {
    write_file(path, ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string as_text(const Bytes& b) { return std::string(b.begin(), b.end()); }

// Payload from --in FILE or --msg TEXT.
struct PayloadSource {
    std::string file;
    std::string msg;

    void attach(CLI::App* cmd, bool required = true) {
        auto* group = cmd->add_option_group("payload");
        group->add_option("--in", file, "Read the payload from a file");
        group->add_option("--msg", msg, "Use this text as the payload");
        if (required) {
            group->require_option(1);
        } else {
            group->require_option(0, 1);
        }
    }

    Bytes load() const {
        if (!file.empty()) return read_file(file);
        return Bytes(msg.begin(), msg.end());
    }
};

// Extracted data goes to --out when given, raw to stdout otherwise.
void emit(const std::string& out_path, ByteView data, std::ostream& out, std::ostream& err) {
    if (out_path.empty()) {
        out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
        out.flush();
    } else {
        write_file(out_path, data);
        err << "wrote " << data.size() << " bytes to " << out_path << '\n';
    }
}

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case ErrorCode::NoMagic:
        case ErrorCode::NoTrailer:
            return kExitNothingFound;
        case ErrorCode::InvalidArgument:
            return kExitUsage;
        default:
            return kExitDataError;
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Steganography and steganalysis toolkit", "stegkit"};
    app.fallthrough();
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "Seed for every generated non-covert field")->capture_default_str();

    // ---- image ----
    auto* image = app.add_subcommand("image", "LSB embedding in BMP images")->require_subcommand(1);

    auto* image_embed = image->add_subcommand("embed", "Hide a payload in the pixel LSBs");
    std::string ie_cover, ie_out;
    PayloadSource ie_payload;
    image_embed->add_option("--cover", ie_cover, "Cover BMP")->required();
    image_embed->add_option("--out", ie_out, "Stego BMP to write")->required();
    ie_payload.attach(image_embed);

    auto* image_extract = image->add_subcommand("extract", "Recover an LSB payload");
    std::string ix_file, ix_out;
    image_extract->add_option("file", ix_file, "Stego BMP")->required();
    image_extract->add_option("--out", ix_out, "Write the payload here instead of stdout");

    auto* image_capacity = image->add_subcommand("capacity", "Report LSB capacity");
    std::string ic_file;
    image_capacity->add_option("file", ic_file, "BMP image")->required();

    // ---- dct ----
    auto* dct = app.add_subcommand("dct", "Embedding in quantized DCT coefficients")->require_subcommand(1);

    auto* dct_embed_cmd = dct->add_subcommand("embed", "Transform a BMP and hide a payload in its coefficients");
    std::string de_cover, de_out, de_preview;
    int de_quality = 75;
    PayloadSource de_payload;
    dct_embed_cmd->add_option("--cover", de_cover, "Cover BMP")->required();
    dct_embed_cmd->add_option("--out", de_out, "Coefficient file (SCF) to write")->required();
    dct_embed_cmd->add_option("--quality", de_quality, "Quantization quality")
        ->check(CLI::Range(1, 100))
        ->capture_default_str();
    dct_embed_cmd->add_option("--preview", de_preview, "Also write the decoded stego image as BMP");
    de_payload.attach(dct_embed_cmd);

    auto* dct_extract_cmd = dct->add_subcommand("extract", "Recover a payload from an SCF file");
    std::string dx_file, dx_out;
    dct_extract_cmd->add_option("file", dx_file, "SCF file")->required();
    dct_extract_cmd->add_option("--out", dx_out, "Write the payload here instead of stdout");

    // ---- file ----
    auto* file = app.add_subcommand("file", "Byte-append hiding")->require_subcommand(1);

    auto* file_append = file->add_subcommand("append", "Append a payload to a cover file");
    std::string fa_cover, fa_out;
    PayloadSource fa_payload;
    file_append->add_option("--cover", fa_cover, "Cover file")->required();
    file_append->add_option("--out", fa_out, "Output file")->required();
    fa_payload.attach(file_append);

    auto* file_scan = file->add_subcommand("scan", "Look for data after the host's end marker");
    std::string fs_file;
    file_scan->add_option("file", fs_file, "File to scan")->required();

    auto* file_extract = file->add_subcommand("extract", "Recover appended data");
    std::string fx_file, fx_out;
    file_extract->add_option("file", fx_file, "File to read")->required();
    file_extract->add_option("--out", fx_out, "Write the trailer here instead of stdout");

    // ---- audio ----
    auto* audio = app.add_subcommand("audio", "WAV LSB coding and spectrogram painting")->require_subcommand(1);

    auto* audio_embed = audio->add_subcommand("embed", "Hide a payload in sample LSBs");
    std::string ae_cover, ae_out;
    PayloadSource ae_payload;
    audio_embed->add_option("--cover", ae_cover, "Cover WAV (mono, 16-bit)")->required();
    audio_embed->add_option("--out", ae_out, "Stego WAV to write")->required();
    ae_payload.attach(audio_embed);

    auto* audio_extract = audio->add_subcommand("extract", "Recover a sample-LSB payload");
    std::string ax_file, ax_out;
    audio_extract->add_option("file", ax_file, "Stego WAV")->required();
    audio_extract->add_option("--out", ax_out, "Write the payload here instead of stdout");

    SpectroParams spectro;
    auto add_spectro_options = [&spectro](CLI::App* cmd) {
        cmd->add_option("--fmin", spectro.f_min, "Lowest painted frequency (Hz)")->capture_default_str();
        cmd->add_option("--fmax", spectro.f_max, "Highest painted frequency (Hz)")->capture_default_str();
        cmd->add_option("--spc", spectro.samples_per_column, "Samples per image column")->capture_default_str();
        cmd->add_option("--fft", spectro.fft_size, "Analysis window length")->capture_default_str();
    };

    auto* audio_paint = audio->add_subcommand("paint", "Render text or an image into a spectrogram");
    std::string ap_text, ap_image, ap_out;
    auto* ap_group = audio_paint->add_option_group("source");
    ap_group->add_option("--text", ap_text, "Text to paint");
    ap_group->add_option("--image", ap_image, "BMP image to paint");
    ap_group->require_option(1);
    audio_paint->add_option("--out", ap_out, "WAV to write")->required();
    audio_paint->add_option("--rate", spectro.sample_rate, "Sample rate")->capture_default_str();
    add_spectro_options(audio_paint);

    auto* audio_unpaint = audio->add_subcommand("unpaint", "Render a WAV's spectrogram as a BMP");
    std::string au_file, au_out;
    std::size_t au_height = kGlyphCellHeight, au_width = 0;
    audio_unpaint->add_option("file", au_file, "WAV file")->required();
    audio_unpaint->add_option("--out", au_out, "BMP to write")->required();
    audio_unpaint->add_option("--height", au_height, "Output rows")->capture_default_str();
    audio_unpaint->add_option("--width", au_width, "Output columns (default: one per analysis frame)");
    add_spectro_options(audio_unpaint);

    // ---- net ----
    auto* net = app.add_subcommand("net", "TCP/IP header covert channels")->require_subcommand(1);
    std::string mode_name;
    std::uint16_t id_scale = 1;
    auto add_mode = [&](CLI::App* cmd) {
        cmd->add_option("--mode", mode_name, "Covert field")
            ->required()
            ->check(CLI::IsMember({"ipid", "seq", "ack"}));
        cmd->add_option("--id-scale", id_scale, "IP ID multiplier (ipid mode)")
            ->check(CLI::Range(1, 257))
            ->capture_default_str();
    };

    auto* net_send = net->add_subcommand("send", "Encode a message as a packet capture");
    std::string ns_out, ns_src = "10.0.0.1", ns_dst = "10.0.0.2";
    std::uint16_t ns_sport = 1234, ns_dport = 80;
    std::uint32_t ns_interval = 1;
    PayloadSource ns_payload;
    add_mode(net_send);
    ns_payload.attach(net_send);
    net_send->add_option("--out", ns_out, "pcap file to write")->required();
    net_send->add_option("--src", ns_src, "Source address (bounce server in ack mode)")->capture_default_str();
    net_send->add_option("--dst", ns_dst, "Destination address (receiver)")->capture_default_str();
    net_send->add_option("--sport", ns_sport, "Source port")->capture_default_str();
    net_send->add_option("--dport", ns_dport, "Destination port")->capture_default_str();
    net_send->add_option("--interval", ns_interval, "Seconds between packets")->capture_default_str();

    auto* net_recv = net->add_subcommand("recv", "Decode a message from a packet capture");
    std::string nr_file, nr_out;
    add_mode(net_recv);
    net_recv->add_option("file", nr_file, "pcap file")->required();
    net_recv->add_option("--out", nr_out, "Write the message here instead of stdout");

    // ---- graph ----
    auto* graph = app.add_subcommand("graph", "Huffman-coded graph series")->require_subcommand(1);

    auto* graph_keygen = graph->add_subcommand("keygen", "Build a key (code table, alpha, beta) from a message");
    std::string gk_out;
    std::uint64_t gk_alpha = 1, gk_beta = 1;
    PayloadSource gk_payload;
    gk_payload.attach(graph_keygen);
    graph_keygen->add_option("--alpha", gk_alpha, "Word separator value")->check(CLI::PositiveNumber)->capture_default_str();
    graph_keygen->add_option("--beta", gk_beta, "Multiplier")->check(CLI::PositiveNumber)->capture_default_str();
    graph_keygen->add_option("--out", gk_out, "Key JSON to write")->required();

    auto* graph_encode = graph->add_subcommand("encode", "Turn a message into an x,y series");
    std::string ge_key, ge_out, ge_title;
    PayloadSource ge_payload;
    ge_payload.attach(graph_encode);
    graph_encode->add_option("--key", ge_key, "Key JSON")->required();
    graph_encode->add_option("--out", ge_out, "CSV to write")->required();
    graph_encode->add_option("--title", ge_title, "Cover story for the series");

    auto* graph_decode = graph->add_subcommand("decode", "Recover a message from a series");
    std::string gd_file, gd_key, gd_out;
    graph_decode->add_option("file", gd_file, "Series CSV")->required();
    graph_decode->add_option("--key", gd_key, "Key JSON")->required();
    graph_decode->add_option("--out", gd_out, "Write the message here instead of stdout");

    // ---- analyze ----
    auto* analyze = app.add_subcommand("analyze", "Chi-square and signature steganalysis");
    std::string an_path;
    bool an_json = false;
    AnalysisOptions an_options;
    analyze->add_option("path", an_path, "File or directory")->required();
    analyze->add_flag("--json", an_json, "Emit JSON instead of text");
    analyze->add_option("--window", an_options.window, "Bytes per chi-square window (0 = whole image)")
        ->capture_default_str();
    analyze->add_option("--detect", an_options.thresholds.detected, "p at or above which stego is reported")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    analyze->add_option("--suspicious", an_options.thresholds.suspicious, "p at or above which a file is suspicious")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();

    std::vector<const char*> cargv;
    cargv.reserve(argv.size());
    for (const auto& a : argv) cargv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*image_embed) {
            const RasterImage cover = decode_bmp(read_file(ie_cover));
            const Bytes payload = ie_payload.load();
            write_file(ie_out, encode_bmp(lsb_embed(cover, payload)));
            out << "embedded " << payload.size() << " bytes into " << cover.width() << "x" << cover.height()
                << " image (usable capacity " << lsb_capacity(cover).usable << " bytes)\n";
        } else if (*image_extract) {
            emit(ix_out, lsb_extract(decode_bmp(read_file(ix_file))), out, err);
        } else if (*image_capacity) {
            const RasterImage img = decode_bmp(read_file(ic_file));
            const Capacity cap = lsb_capacity(img);
            out << img.width() << "x" << img.height() << "x" << img.channels() << ": " << cap.total
                << " bytes total, " << cap.usable << " bytes usable\n";
        } else if (*dct_embed_cmd) {
            const CoeffPlane plane = image_to_coeffs(decode_bmp(read_file(de_cover)), de_quality);
            const Bytes payload = de_payload.load();
            const CoeffPlane stego = dct_embed(plane, payload);
            write_file(de_out, write_scf(stego));
            if (!de_preview.empty()) write_file(de_preview, encode_bmp(coeffs_to_image(stego)));
            const Capacity cap = dct_capacity(plane);
            const std::size_t coeffs = plane.blocks.size() * kBlockCoeffs;
            out << "embedded " << payload.size() << " bytes; usable capacity " << cap.usable << " bytes ("
                << std::fixed << std::setprecision(1) << 100.0 * static_cast<double>(cap.total) / (2.0 * coeffs)
                << "% of the coefficient data)\n";
        } else if (*dct_extract_cmd) {
            emit(dx_out, dct_extract(read_scf(read_file(dx_file))), out, err);
        } else if (*file_append) {
            const Bytes cover = read_file(fa_cover);
            const Bytes payload = fa_payload.load();
            const Bytes joined = append_embed(cover, payload);
            write_file(fa_out, joined);
            out << cover.size() << " + " << payload.size() << " = " << joined.size() << " bytes\n"
                << "        1 file(s) copied.\n";
        } else if (*file_scan) {
            const Bytes data = read_file(fs_file);
            const auto finding = scan_trailer(data);
            if (!finding) {
                out << fs_file << ": no trailer\n";
                return kExitNothingFound;
            }
            out << fs_file << ": " << to_string(finding->host_format) << " host, "
                << to_string(finding->trailer_kind) << " trailer at offset " << finding->trailer_offset << " ("
                << data.size() - finding->trailer_offset << " bytes)\n";
        } else if (*file_extract) {
            emit(fx_out, extract_trailer(read_file(fx_file)), out, err);
        } else if (*audio_embed) {
            const WavAudio cover = decode_wav(read_file(ae_cover));
            const Bytes payload = ae_payload.load();
            write_file(ae_out, encode_wav(audio_lsb_embed(cover, payload)));
            out << "embedded " << payload.size() << " bytes into " << cover.samples.size()
                << " samples (usable capacity " << audio_lsb_capacity(cover).usable << " bytes)\n";
        } else if (*audio_extract) {
            emit(ax_out, audio_lsb_extract(decode_wav(read_file(ax_file))), out, err);
        } else if (*audio_paint) {
            const RasterImage img = ap_image.empty() ? rasterize_text(ap_text) : decode_bmp(read_file(ap_image));
            const WavAudio wav = spectro_encode(img, spectro);
            write_file(ap_out, encode_wav(wav));
            out << "painted " << img.width() << "x" << img.height() << " image into " << wav.samples.size()
                << " samples (" << std::fixed << std::setprecision(3) << wav.duration_seconds() << " s)\n";
        } else if (*audio_unpaint) {
            const WavAudio wav = decode_wav(read_file(au_file));
            const std::size_t width = au_width != 0 ? au_width : std::max<std::size_t>(1, wav.samples.size() / spectro.samples_per_column);
            const RasterImage img = spectro_decode(wav, au_height, width, spectro);
            write_file(au_out, encode_bmp(img));
            out << "wrote " << img.width() << "x" << img.height() << " spectrogram to " << au_out << '\n';
        } else if (*net_send) {
            CovertOptions opts;
            opts.src = Ipv4Address::parse(ns_src);
            opts.dst = Ipv4Address::parse(ns_dst);
            opts.src_port = ns_sport;
            opts.dst_port = ns_dport;
            opts.id_scale = id_scale;
            opts.seed = seed;
            opts.interval_sec = ns_interval;
            const Bytes message = ns_payload.load();
            const PcapCapture capture = covert_encode(message, *parse_covert_mode(mode_name), opts);
            write_file(ns_out, write_pcap(capture));
            out << "sent " << capture.records.size() << " packets (" << mode_name << " mode) to " << ns_out << '\n';
        } else if (*net_recv) {
            const PcapCapture capture = read_pcap(read_file(nr_file));
            emit(nr_out, covert_decode(capture, *parse_covert_mode(mode_name), id_scale), out, err);
        } else if (*graph_keygen) {
            const GraphKey key{gk_alpha, gk_beta, build_table(as_text(gk_payload.load()))};
            write_text(gk_out, key_to_json(key));
            out << "key with " << key.table.codes().size() << " letters written to " << gk_out << '\n';
        } else if (*graph_encode) {
            const GraphKey key = key_from_json(as_text(read_file(ge_key)));
            const GraphSeries series = encode_series(as_text(ge_payload.load()), key, ge_title);
            write_text(ge_out, serialize_series(series));
            out << series.points.size() << " points written to " << ge_out << '\n';
        } else if (*graph_decode) {
            const GraphKey key = key_from_json(as_text(read_file(gd_key)));
            const std::string message = decode_series(parse_series(as_text(read_file(gd_file))), key);
            emit(gd_out, ByteView(reinterpret_cast<const std::uint8_t*>(message.data()), message.size()), out, err);
        } else if (*analyze) {
            const auto reports = analyze_path(an_path, an_options);
            if (an_json) {
                // a directory always yields an array, even with one file in it
                std::error_code ec;
                const bool dir = std::filesystem::is_directory(an_path, ec);
                out << (dir ? reports_to_json(reports) : report_to_json(reports.front())) << '\n';
            } else {
                for (const auto& r : reports) out << report_to_text(r);
            }
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return kExitOk;
}

}  // namespace stegkit
