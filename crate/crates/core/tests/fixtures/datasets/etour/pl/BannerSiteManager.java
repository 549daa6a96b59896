public class BannerSiteManager {
    public void approveSite(Site site) {
        siteStore.approve(site);
    }
    public void validateBanner(Banner banner) {
        bannerStore.validate(banner);
    }
}
