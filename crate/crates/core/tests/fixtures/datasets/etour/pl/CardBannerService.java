public class CardBannerService {
    public void validateBanner(Banner banner) {
        bannerStore.validate(banner);
    }
    public void addCard(Card card) {
        cardStore.add(card);
    }
    public void scheduleBanner(Banner banner) {
        bannerStore.schedule(banner);
    }
    public void notifyCard(Card card) {
        cardStore.notify(card);
    }
}
